#include "promptevo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace promptevo {

std::string_view to_string(TextFilterMode mode) {
    switch (mode) {
        case TextFilterMode::per_text: return "per_text";
        case TextFilterMode::prompt_average: return "prompt_average";
        case TextFilterMode::both: return "both";
    }
    return "?";
}

TextFilterMode filter_mode_from_string(std::string_view name) {
    if (name == "per_text" || name == "pertext") return TextFilterMode::per_text;
    if (name == "prompt_average" || name == "promptaverage") return TextFilterMode::prompt_average;
    if (name == "both") return TextFilterMode::both;
    throw Error(ErrorCode::config_invalid,
                "unknown filter mode '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
    if (max_iterations < 1) {
        throw Error(ErrorCode::config_invalid, "max_iterations must be >= 1");
    }
    if (label_set.empty()) {
        throw Error(ErrorCode::config_invalid, "label_set must be non-empty");
    }
    if (placeholder_sentinel.empty() || mask_sentinel.empty()) {
        throw Error(ErrorCode::config_invalid, "sentinels must be non-empty");
    }
    bleu.validate();
    generation.validate();
}

Candidate evaluate_prompt(const Prompt& prompt, const BackendSuite& backends,
                          const OptimizerConfig& cfg) {
    cfg.validate();
    Candidate candidate;
    candidate.prompt = prompt;

    const bool per_text_filter =
        cfg.filter_mode == TextFilterMode::per_text || cfg.filter_mode == TextFilterMode::both;
    const bool average_filter = cfg.filter_mode == TextFilterMode::prompt_average ||
                                cfg.filter_mode == TextFilterMode::both;

    double bleu_sum = 0.0;
    long bleu_count = 0;
    std::vector<std::string> kept_texts;
    std::vector<std::string> kept_gold;
    // position of each kept text inside candidate.per_condition, for verdicts
    std::vector<std::pair<std::size_t, std::size_t>> kept_slots;

    try {
        for (const auto& label : cfg.label_set) {
            const auto conditional = render(prompt, label, cfg.label_set);
            PerConditionOutcome outcome;
            outcome.label = label;
            outcome.conditional_text = conditional.text;
            outcome.texts = backends.generator->generate_texts(conditional.text, cfg.generation);
            outcome.bleu.resize(outcome.texts.size());
            outcome.kept.resize(outcome.texts.size(), false);
            outcome.verdict.resize(outcome.texts.size());
            for (std::size_t i = 0; i < outcome.texts.size(); ++i) {
                if (bleu_tokenize(outcome.texts[i]).empty()) {
                    candidate.warnings.push_back("dropped text empty after normalization for '" +
                                                 label + "'");
                    continue;  // bleu stays null, text stays filtered
                }
                const double score = bleu_sentence(outcome.texts[i], conditional.text, cfg.bleu);
                outcome.bleu[i] = score;
                bleu_sum += score;
                ++bleu_count;
                const bool filtered = per_text_filter && score > cfg.bleu.threshold;
                if (!filtered) {
                    outcome.kept[i] = true;
                    kept_texts.push_back(outcome.texts[i]);
                    kept_gold.push_back(label);
                    kept_slots.emplace_back(candidate.per_condition.size(), i);
                }
            }
            candidate.per_condition.push_back(std::move(outcome));
        }

        if (!kept_texts.empty()) {
            const auto verdicts = backends.classifier->classify_texts(kept_texts);
            std::vector<std::string> predictions;
            predictions.reserve(verdicts.size());
            for (std::size_t i = 0; i < verdicts.size(); ++i) {
                predictions.push_back(verdicts[i].label);
                const auto [condition_index, text_index] = kept_slots[i];
                candidate.per_condition[condition_index].verdict[text_index] = verdicts[i].label;
            }
            const auto confusion = tally(predictions, kept_gold, cfg.label_set);
            candidate.score.macro_f1 = macro_f1(confusion);
            candidate.score.per_label = per_label_f1(confusion);
        }
    } catch (const Error& error) {
        candidate.warnings.push_back(std::string("backend failure: ") + error.what());
        candidate.score = ObjectiveScore{};
        candidate.score.disqualified = true;
        return candidate;
    }

    long total_texts = 0;
    for (const auto& outcome : candidate.per_condition) {
        total_texts += static_cast<long>(outcome.texts.size());
    }
    candidate.score.n_texts_scored = static_cast<long>(kept_texts.size());
    candidate.score.n_texts_filtered = total_texts - static_cast<long>(kept_texts.size());

    if (kept_texts.empty()) {
        candidate.score.disqualified = true;
        candidate.warnings.push_back("all generated texts were filtered");
    }
    if (average_filter && bleu_count > 0 &&
        bleu_sum / static_cast<double>(bleu_count) > cfg.bleu.threshold) {
        candidate.score.disqualified = true;
        candidate.warnings.push_back("average BLEU across conditional prompts exceeds threshold");
    }
    return candidate;
}

std::vector<Candidate> evaluate_prompts(const std::vector<Prompt>& prompts,
                                        const BackendSuite& backends,
                                        const OptimizerConfig& cfg) {
    std::vector<Candidate> results(prompts.size());
    for_each_index(cfg.exec, prompts.size(),
                   [&](std::size_t i) { results[i] = evaluate_prompt(prompts[i], backends, cfg); });
    return results;
}

IterationRecord run_iteration(const Candidate& parent, int iteration,
                              const BackendSuite& backends, const OptimizerConfig& cfg) {
    IterationRecord record;
    record.iteration = iteration;
    record.parent_id = parent.prompt.id;

    ChildBatch batch = expand_children(parent.prompt, *backends.proposer, cfg.mask_sentinel);
    record.warnings = std::move(batch.warnings);
    for (std::size_t i = 0; i < batch.children.size(); ++i) {
        batch.children[i].id = "i" + std::to_string(iteration) + "c" + std::to_string(i);
    }

    record.children = evaluate_prompts(batch.children, backends, cfg);

    // Comma selection: the running best starts at the disqualified sentinel,
    // so the parent never takes part and only a strictly greater child wins.
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = record.children.size();
    for (std::size_t i = 0; i < record.children.size(); ++i) {
        const double value = record.children[i].score.comparison_value();
        if (value > best) {
            best = value;
            best_index = i;
        }
    }

    if (best_index == record.children.size() || !std::isfinite(best)) {
        record.incumbent = parent;
        record.carried_over = true;
        record.warnings.push_back("all children disqualified; parent carried over");
    } else {
        record.incumbent = record.children[best_index];
    }
    return record;
}

const PoolEntry& select_one_best(const std::vector<PoolEntry>& pool) {
    if (pool.empty()) {
        throw Error(ErrorCode::empty_pool, "candidate pool is empty");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
        // strictly greater keeps the earliest iteration on ties
        if (pool[i].candidate.score.comparison_value() >
            pool[best].candidate.score.comparison_value()) {
            best = i;
        }
    }
    return pool[best];
}

OptimizeOutcome optimize(const std::string& seed_text, const BackendSuite& backends,
                         const OptimizerConfig& cfg) {
    cfg.validate();
    Prompt seed = tokenize_prompt(seed_text, cfg.placeholder_sentinel);
    seed.id = "s0";

    OptimizeOutcome outcome;
    outcome.pool.push_back({0, evaluate_prompt(seed, backends, cfg)});

    Candidate parent = outcome.pool.front().candidate;
    for (int iteration = 1; iteration <= cfg.max_iterations; ++iteration) {
        IterationRecord record = run_iteration(parent, iteration, backends, cfg);
        parent = record.incumbent;
        outcome.pool.push_back({iteration, record.incumbent});
        outcome.iterations.push_back(std::move(record));
    }

    const PoolEntry& best = select_one_best(outcome.pool);
    outcome.best_pool_index = static_cast<std::size_t>(&best - outcome.pool.data());
    if (best.candidate.score.disqualified) {
        outcome.warnings.push_back(
            "every pool entry is disqualified; returning the seed candidate");
    }
    return outcome;
}

}  // namespace promptevo
