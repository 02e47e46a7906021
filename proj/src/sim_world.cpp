#include "promptevo/sim_world.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "promptevo/rng.hpp"

namespace promptevo::sim {

namespace {

std::vector<std::string> split_ws(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream stream(text);
    std::string tok;
    while (stream >> tok) out.push_back(tok);
    return out;
}

std::string strip_punct_lower(const std::string& token) {
    std::size_t begin = 0;
    std::size_t end = token.size();
    while (begin < end && std::ispunct(static_cast<unsigned char>(token[begin]))) ++begin;
    while (end > begin && std::ispunct(static_cast<unsigned char>(token[end - 1]))) --end;
    std::string out = token.substr(begin, end - begin);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string substitute(const std::string& templ, const std::string& prompt,
                       const std::string& label) {
    std::string out = templ;
    auto replace_all = [&](const std::string& needle, const std::string& value) {
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    };
    replace_all("{prompt}", prompt);
    replace_all("{label}", label);
    return out;
}

}  // namespace

const std::string& ToyWorldSpec::confusion_of(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    const std::size_t index = it == labels.end()
                                  ? 0
                                  : static_cast<std::size_t>(it - labels.begin());
    return labels[(index + 1) % labels.size()];
}

void ToyWorldSpec::validate() const {
    if (labels.empty()) {
        throw Error(ErrorCode::config_invalid, "toy world needs at least one label");
    }
    if (std::find(labels.begin(), labels.end(), fallback_label) == labels.end()) {
        throw Error(ErrorCode::config_invalid, "fallback_label must be one of the labels");
    }
    if (noise_rate < 0.0 || noise_rate >= 1.0) {
        throw Error(ErrorCode::config_invalid, "noise_rate must be in [0, 1)");
    }
    for (const auto& label : labels) {
        const auto it = templates.find(label);
        if (it == templates.end() || it->second.empty()) {
            throw Error(ErrorCode::config_invalid,
                        "label '" + label + "' has no emission templates");
        }
        const bool has_keyword = std::any_of(
            keywords.begin(), keywords.end(),
            [&](const auto& kv) { return kv.second == label; });
        if (!has_keyword) {
            throw Error(ErrorCode::config_invalid, "label '" + label + "' has no keyword");
        }
    }
    for (const auto& [token, score] : lexicon.entries) {
        if (!std::isfinite(score)) {
            throw Error(ErrorCode::config_invalid, "non-finite lexicon score for '" + token + "'");
        }
    }
    for (const auto& ov : lexicon.overrides) {
        if (ov.tokens.empty()) {
            throw Error(ErrorCode::config_invalid, "empty override token list");
        }
    }
    for (const auto& rule : triggers) {
        for (const auto& [label, templ] : rule.emissions) {
            if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
                throw Error(ErrorCode::config_invalid,
                            "trigger emission for unknown label '" + label + "'");
            }
            if (templ.empty()) {
                throw Error(ErrorCode::config_invalid, "trigger rule with empty template list");
            }
        }
    }
}

ToyWorldSpec ToyWorldSpec::from_json(const nlohmann::json& j) {
    try {
        ToyWorldSpec spec;
        spec.labels = j.at("labels").get<std::vector<std::string>>();
        spec.fallback_label = j.at("fallback_label").get<std::string>();
        spec.noise_seed = j.value("noise_seed", std::uint64_t{0});
        spec.noise_rate = j.value("noise_rate", 0.0);
        for (const auto& [token, score] : j.at("lexicon").at("entries").items()) {
            spec.lexicon.entries.emplace_back(token, score.get<double>());
        }
        for (const auto& ov : j.at("lexicon").value("overrides", nlohmann::json::array())) {
            spec.lexicon.overrides.push_back({ov.at("left").get<std::string>(),
                                              ov.at("right").get<std::string>(),
                                              ov.at("tokens").get<std::vector<std::string>>()});
        }
        for (const auto& [label, templ] : j.at("templates").items()) {
            spec.templates[label] = templ.get<std::vector<std::string>>();
        }
        for (const auto& rule : j.value("triggers", nlohmann::json::array())) {
            TriggerRule r;
            r.tokens = rule.at("tokens").get<std::vector<std::string>>();
            for (const auto& [label, templ] : rule.at("emissions").items()) {
                r.emissions[label] = templ.get<std::vector<std::string>>();
            }
            spec.triggers.push_back(std::move(r));
        }
        for (const auto& kv : j.at("keywords")) {
            spec.keywords.emplace_back(kv.at("token").get<std::string>(),
                                       kv.at("label").get<std::string>());
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_invalid, std::string("bad toy world fixture: ") + e.what());
    }
}

ToyWorldSpec ToyWorldSpec::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::config_invalid, "cannot open fixture file '" + path + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config_invalid, std::string("fixture is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

nlohmann::json ToyWorldSpec::to_json() const {
    nlohmann::json j;
    j["labels"] = labels;
    j["fallback_label"] = fallback_label;
    j["noise_seed"] = noise_seed;
    j["noise_rate"] = noise_rate;
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [token, score] : lexicon.entries) entries[token] = score;
    j["lexicon"]["entries"] = entries;
    j["lexicon"]["overrides"] = nlohmann::json::array();
    for (const auto& ov : lexicon.overrides) {
        j["lexicon"]["overrides"].push_back(
            {{"left", ov.left}, {"right", ov.right}, {"tokens", ov.tokens}});
    }
    j["templates"] = templates;
    j["triggers"] = nlohmann::json::array();
    for (const auto& rule : triggers) {
        j["triggers"].push_back({{"tokens", rule.tokens}, {"emissions", rule.emissions}});
    }
    j["keywords"] = nlohmann::json::array();
    for (const auto& [token, label] : keywords) {
        j["keywords"].push_back({{"token", token}, {"label", label}});
    }
    return j;
}

ToyProposer::ToyProposer(std::shared_ptr<const ToyWorldSpec> world, std::string mask_sentinel)
    : world_(std::move(world)), mask_sentinel_(std::move(mask_sentinel)) {}

std::vector<TokenProposal> ToyProposer::propose_tokens(const std::string& masked_text,
                                                       int top_k) {
    if (top_k < 1) {
        throw Error(ErrorCode::config_invalid, "top_k must be >= 1");
    }
    const auto tokens = split_ws(masked_text);
    std::size_t mask_count = 0;
    std::size_t mask_index = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == mask_sentinel_) {
            ++mask_count;
            mask_index = i;
        }
    }
    if (mask_count != 1) {
        throw Error(ErrorCode::no_mask_in_request,
                    "masked text must contain the mask sentinel exactly once");
    }
    const std::string left = mask_index > 0 ? tokens[mask_index - 1] : std::string{};
    const std::string right =
        mask_index + 1 < tokens.size() ? tokens[mask_index + 1] : std::string{};

    for (const auto& ov : world_->lexicon.overrides) {
        if (ov.left == left && ov.right == right) {
            std::vector<TokenProposal> out;
            const std::size_t n = std::min<std::size_t>(ov.tokens.size(),
                                                        static_cast<std::size_t>(top_k));
            for (std::size_t rank = 0; rank < n; ++rank) {
                out.push_back({ov.tokens[rank], 1.0 / static_cast<double>(rank + 1)});
            }
            return out;
        }
    }
    auto ranked = world_->lexicon.entries;
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<TokenProposal> out;
    const std::size_t n = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(top_k));
    for (std::size_t i = 0; i < n; ++i) out.push_back({ranked[i].first, ranked[i].second});
    return out;
}

ToyGenerator::ToyGenerator(std::shared_ptr<const ToyWorldSpec> world) : world_(std::move(world)) {}

std::vector<std::string> ToyGenerator::generate_texts(const std::string& conditional_prompt,
                                                      const GenerationParams& params) {
    params.validate();
    const auto tokens = split_ws(conditional_prompt);
    if (tokens.empty()) {
        throw Error(ErrorCode::empty_generation, "empty conditional prompt");
    }

    // The engine renders the condition label last; scan right to left so a
    // label mentioned mid-prompt does not shadow the instantiating one.
    const auto& labels = world_->labels;
    std::size_t condition_index = tokens.size();
    for (std::size_t i = tokens.size(); i-- > 0;) {
        if (std::find(labels.begin(), labels.end(), tokens[i]) != labels.end()) {
            condition_index = i;
            break;
        }
    }
    const std::string condition =
        condition_index < tokens.size() ? tokens[condition_index] : world_->fallback_label;

    std::set<std::string> mutable_tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i != condition_index) mutable_tokens.insert(tokens[i]);
    }

    // Most specific matching rule: largest trigger set, ties by declaration.
    const TriggerRule* rule = nullptr;
    for (const auto& candidate : world_->triggers) {
        const bool subset = std::all_of(
            candidate.tokens.begin(), candidate.tokens.end(),
            [&](const std::string& t) { return mutable_tokens.count(t) != 0; });
        if (!subset) continue;
        if (!rule || candidate.tokens.size() > rule->tokens.size()) rule = &candidate;
    }

    const std::vector<std::string>* templates = nullptr;
    if (rule) {
        const auto it = rule->emissions.find(condition);
        if (it != rule->emissions.end()) templates = &it->second;
    }
    if (!templates) {
        templates = &world_->templates.at(world_->confusion_of(condition));
    }

    const std::size_t count = std::min<std::size_t>(
        templates->size(), static_cast<std::size_t>(params.num_return));

    SplitMixRng rng(world_->noise_seed ^ fnv1a64(conditional_prompt) ^
                    (params.seed.value_or(0) * 0x9e3779b97f4a7c15ull));
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::string text = (*templates)[i];
        if (world_->noise_rate > 0.0 && rng.next_double() < world_->noise_rate) {
            std::vector<std::string> others;
            for (const auto& label : labels) {
                if (label != condition) others.push_back(label);
            }
            if (!others.empty()) {
                const auto& swapped = others[rng.next_below(others.size())];
                const auto& pool = world_->templates.at(swapped);
                text = pool[i % pool.size()];
            }
        }
        out.push_back(substitute(text, conditional_prompt, condition));
    }
    return out;
}

ToyClassifier::ToyClassifier(std::shared_ptr<const ToyWorldSpec> world) : world_(std::move(world)) {}

std::vector<ClassifierVerdict> ToyClassifier::classify_texts(
    const std::vector<std::string>& texts) {
    if (texts.empty()) {
        throw Error(ErrorCode::config_invalid, "classify batch must be non-empty");
    }
    std::vector<ClassifierVerdict> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::string label = world_->fallback_label;
        bool found = false;
        for (const auto& token : split_ws(text)) {
            const std::string normalized = strip_punct_lower(token);
            for (const auto& [keyword, mapped] : world_->keywords) {
                if (normalized == keyword) {
                    label = mapped;
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        out.push_back({text, label});
    }
    return out;
}

BackendSuite make_toy_backends(std::shared_ptr<const ToyWorldSpec> world,
                               const std::string& mask_sentinel) {
    BackendSuite suite;
    suite.proposer = std::make_shared<ToyProposer>(world, mask_sentinel);
    suite.generator = std::make_shared<ToyGenerator>(world);
    suite.classifier = std::make_shared<ToyClassifier>(world);
    return suite;
}

}  // namespace promptevo::sim
