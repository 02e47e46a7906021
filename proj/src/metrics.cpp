#include "promptevo/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace promptevo {

namespace {

constexpr std::string_view kTerminalPunctuation = ".,!?;:";

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

void BleuConfig::validate() const {
    if (max_ngram_order < 1) {
        throw Error(ErrorCode::config_invalid, "max_ngram_order must be >= 1");
    }
    if (!(smoothing_epsilon > 0.0)) {
        throw Error(ErrorCode::config_invalid, "smoothing_epsilon must be positive");
    }
    if (threshold < 0.0 || threshold > 1.0) {
        throw Error(ErrorCode::config_invalid, "threshold must be in [0, 1]");
    }
}

std::vector<std::string> bleu_tokenize(const std::string& text) {
    std::string lowered;
    lowered.reserve(text.size());
    for (unsigned char c : text) {
        lowered.push_back(static_cast<char>(std::tolower(c)));
    }
    // strip terminal punctuation (and any whitespace it exposes) from the end
    while (!lowered.empty() &&
           (is_space(static_cast<unsigned char>(lowered.back())) ||
            kTerminalPunctuation.find(lowered.back()) != std::string_view::npos)) {
        lowered.pop_back();
    }
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < lowered.size()) {
        while (i < lowered.size() && is_space(static_cast<unsigned char>(lowered[i]))) ++i;
        std::size_t start = i;
        while (i < lowered.size() && !is_space(static_cast<unsigned char>(lowered[i]))) ++i;
        if (i > start) tokens.push_back(lowered.substr(start, i - start));
    }
    return tokens;
}

namespace {

/// Joined n-gram keys; '\x1f' cannot occur inside a token.
std::unordered_map<std::string, long> ngram_counts(const std::vector<std::string>& tokens,
                                                   std::size_t order) {
    std::unordered_map<std::string, long> counts;
    if (tokens.size() < order) return counts;
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (std::size_t j = 1; j < order; ++j) {
            key += '\x1f';
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace

double bleu_sentence(const std::string& candidate, const std::string& reference,
                     const BleuConfig& cfg) {
    cfg.validate();
    const auto cand = bleu_tokenize(candidate);
    const auto ref = bleu_tokenize(reference);
    if (cand.empty() || ref.empty()) {
        throw Error(ErrorCode::empty_text, "BLEU inputs must be non-empty after tokenization");
    }
    const std::size_t orders =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.max_ngram_order), cand.size());
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= orders; ++n) {
        const auto cand_counts = ngram_counts(cand, n);
        const auto ref_counts = ngram_counts(ref, n);
        long total = 0;
        long matched = 0;
        for (const auto& [key, count] : cand_counts) {
            total += count;
            const auto it = ref_counts.find(key);
            if (it != ref_counts.end()) matched += std::min(count, it->second);
        }
        const double precision = matched > 0
                                     ? static_cast<double>(matched) / static_cast<double>(total)
                                     : cfg.smoothing_epsilon;
        log_sum += std::log(precision);
    }
    const double geometric_mean = std::exp(log_sum / static_cast<double>(orders));
    const double c = static_cast<double>(cand.size());
    const double r = static_cast<double>(ref.size());
    const double brevity_penalty = c < r ? std::exp(1.0 - r / c) : 1.0;
    return brevity_penalty * geometric_mean;
}

bool is_paraphrase(const std::string& candidate, const std::string& conditional_prompt,
                   const BleuConfig& cfg) {
    return bleu_sentence(candidate, conditional_prompt, cfg) > cfg.threshold;
}

ConfusionTally tally(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& gold,
                     const std::vector<std::string>& label_set) {
    if (predictions.size() != gold.size()) {
        throw Error(ErrorCode::length_mismatch, "predictions and gold differ in length");
    }
    ConfusionTally t;
    t.labels = label_set;
    for (const auto& label : label_set) {
        t.tp[label] = 0;
        t.fp[label] = 0;
        t.fn[label] = 0;
    }
    auto known = [&](const std::string& label) { return t.tp.count(label) != 0; };
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!known(predictions[i]) || !known(gold[i])) {
            throw Error(ErrorCode::unknown_label,
                        "label outside the configured set: '" +
                            (known(gold[i]) ? predictions[i] : gold[i]) + "'");
        }
        if (predictions[i] == gold[i]) {
            ++t.tp[gold[i]];
        } else {
            ++t.fp[predictions[i]];
            ++t.fn[gold[i]];
        }
    }
    t.total = static_cast<long>(predictions.size());
    return t;
}

std::map<std::string, double> per_label_f1(const ConfusionTally& t) {
    std::map<std::string, double> out;
    for (const auto& label : t.labels) {
        const long tp = t.tp.at(label);
        const long denom = 2 * tp + t.fp.at(label) + t.fn.at(label);
        out[label] = denom == 0 ? 0.0
                                : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    }
    return out;
}

double macro_f1(const ConfusionTally& t) {
    if (t.labels.empty()) return 0.0;
    double sum = 0.0;
    const auto f1 = per_label_f1(t);
    for (const auto& label : t.labels) sum += f1.at(label);
    return sum / static_cast<double>(t.labels.size());
}

double ObjectiveScore::comparison_value() const {
    return disqualified ? -std::numeric_limits<double>::infinity() : macro_f1;
}

}  // namespace promptevo
