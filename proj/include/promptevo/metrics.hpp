#pragma once

#include <map>
#include <string>
#include <vector>

#include "promptevo/errors.hpp"

namespace promptevo {

/// Sentence-BLEU settings for the paraphrase filter.
struct BleuConfig {
    int max_ngram_order = 4;
    double smoothing_epsilon = 1e-9;
    double threshold = 0.2;

    void validate() const;
};

/// Shared normalization for BLEU: lowercase, strip terminal punctuation from
/// the end of the string, split on whitespace.
std::vector<std::string> bleu_tokenize(const std::string& text);

/// Sentence BLEU: clipped modified n-gram precisions for n = 1..min(max
/// order, candidate length), a zero-match precision floors at
/// smoothing_epsilon, geometric mean, Papineni brevity penalty
/// exp(1 - r/c) when the candidate is shorter than the reference.
double bleu_sentence(const std::string& candidate, const std::string& reference,
                     const BleuConfig& cfg);

/// True iff the candidate scores strictly above cfg.threshold against the
/// conditional prompt, i.e. the text merely restates the prompt.
bool is_paraphrase(const std::string& candidate, const std::string& conditional_prompt,
                   const BleuConfig& cfg);

/// Per-label true positives / false positives / false negatives.
struct ConfusionTally {
    std::vector<std::string> labels;
    std::map<std::string, long> tp;
    std::map<std::string, long> fp;
    std::map<std::string, long> fn;
    long total = 0;
};

ConfusionTally tally(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& gold,
                     const std::vector<std::string>& label_set);

/// Per label F1 = 2TP / (2TP + FP + FN), 0 when the denominator is 0; the
/// macro average runs over the full configured label set.
double macro_f1(const ConfusionTally& t);
std::map<std::string, double> per_label_f1(const ConfusionTally& t);

/// Outcome of scoring one candidate prompt.
struct ObjectiveScore {
    double macro_f1 = 0.0;
    std::map<std::string, double> per_label;
    long n_texts_scored = 0;
    long n_texts_filtered = 0;
    bool disqualified = false;

    /// Value used in every comparison; disqualified candidates lose to
    /// anything scored.
    double comparison_value() const;
};

}  // namespace promptevo
