#pragma once

#include <optional>
#include <string>
#include <vector>

#include "promptevo/backend.hpp"
#include "promptevo/metrics.hpp"
#include "promptevo/parallel.hpp"
#include "promptevo/prompt.hpp"

namespace promptevo {

enum class TextFilterMode { per_text, prompt_average, both };

std::string_view to_string(TextFilterMode mode);
TextFilterMode filter_mode_from_string(std::string_view name);

inline std::vector<std::string> default_condition_labels() {
    return {"anger", "disgust", "fear", "guilt", "joy", "sadness", "shame"};
}

/// Settings of one optimization run. mu is fixed at 1: each iteration keeps
/// exactly one incumbent and the parent never competes with its children.
struct OptimizerConfig {
    int max_iterations = 10;
    std::vector<std::string> label_set = default_condition_labels();
    BleuConfig bleu;
    GenerationParams generation;
    TextFilterMode filter_mode = TextFilterMode::both;
    std::string placeholder_sentinel = "<em>";
    std::string mask_sentinel = "<mask>";
    ExecPolicy exec;

    void validate() const;
};

/// Everything observed while scoring one prompt for one condition.
struct PerConditionOutcome {
    std::string label;
    std::string conditional_text;
    std::vector<std::string> texts;
    std::vector<std::optional<double>> bleu;   // null for texts empty after normalization
    std::vector<bool> kept;
    std::vector<std::optional<std::string>> verdict;  // null for filtered texts
};

/// A prompt with its generated texts, filter outcomes, verdicts and score.
struct Candidate {
    Prompt prompt;
    std::vector<PerConditionOutcome> per_condition;
    ObjectiveScore score;
    std::vector<std::string> warnings;
};

struct IterationRecord {
    int iteration = 0;
    std::string parent_id;
    std::vector<Candidate> children;
    Candidate incumbent;
    bool carried_over = false;  // all children disqualified, parent kept alive
    std::vector<std::string> warnings;
};

struct PoolEntry {
    int iteration = 0;  // 0 is the seed's own evaluation
    Candidate candidate;
};

/// Scores one prompt: render per label, generate, BLEU-filter per
/// filter_mode, classify the kept texts against the instantiating labels,
/// macro-F1 over the full label set. Backend failures disqualify the
/// candidate with a warning instead of aborting the batch.
Candidate evaluate_prompt(const Prompt& prompt, const BackendSuite& backends,
                          const OptimizerConfig& cfg);

/// Evaluates a batch of prompts; the data-parallel kernel behind iterations
/// and the oracle. Output order matches input order regardless of cfg.exec.
std::vector<Candidate> evaluate_prompts(const std::vector<Prompt>& prompts,
                                        const BackendSuite& backends,
                                        const OptimizerConfig& cfg);

/// One comma-selection step: expand the parent's children, evaluate them all,
/// and pick the first strict maximum in deterministic child order. The parent
/// is not in the comparison set; if every child is disqualified the parent is
/// carried over and the record flagged.
IterationRecord run_iteration(const Candidate& parent, int iteration,
                              const BackendSuite& backends, const OptimizerConfig& cfg);

/// Pool argmax; ties go to the earliest iteration. Throws EmptyPool on an
/// empty pool. An all-disqualified pool yields the seed entry (iteration 0).
const PoolEntry& select_one_best(const std::vector<PoolEntry>& pool);

struct OptimizeOutcome {
    std::vector<PoolEntry> pool;                 // seed + one incumbent per iteration
    std::vector<IterationRecord> iterations;
    std::size_t best_pool_index = 0;
    std::vector<std::string> warnings;

    const PoolEntry& best() const { return pool[best_pool_index]; }
};

/// Algorithm: evaluate the seed, run N comma-selection iterations each
/// chaining the previous incumbent, then select the best pool entry.
OptimizeOutcome optimize(const std::string& seed_text, const BackendSuite& backends,
                         const OptimizerConfig& cfg);

}  // namespace promptevo
