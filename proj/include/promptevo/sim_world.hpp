#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "promptevo/backend.hpp"
#include "promptevo/errors.hpp"

namespace promptevo::sim {

/// Global token scores plus per-context overrides for the toy proposer.
struct ToyLexicon {
    struct Override {
        std::string left;   // token to the left of the mask, "" at the boundary
        std::string right;  // token to the right of the mask, "" at the boundary
        std::vector<std::string> tokens;  // ranked, best first
    };
    std::vector<std::pair<std::string, double>> entries;
    std::vector<Override> overrides;
};

/// Generation rule: when `tokens` is a subset of the prompt's mutable tokens
/// the rule is a match candidate; the most specific match (largest token set,
/// ties by declaration order) decides the emissions for every condition.
struct TriggerRule {
    std::vector<std::string> tokens;
    std::map<std::string, std::vector<std::string>> emissions;  // label -> templates
};

/// Complete description of a deterministic toy backend triple. Templates may
/// contain "{prompt}" (replaced by the conditional prompt, which is how the
/// prompt-echo pathology is modelled) and "{label}".
struct ToyWorldSpec {
    std::vector<std::string> labels;
    std::string fallback_label;
    std::uint64_t noise_seed = 0;
    double noise_rate = 0.0;
    ToyLexicon lexicon;
    std::map<std::string, std::vector<std::string>> templates;       // base store
    std::vector<TriggerRule> triggers;
    std::vector<std::pair<std::string, std::string>> keywords;       // ordered scan

    /// Condition a mismatching prompt drifts to: the next label, cyclically.
    const std::string& confusion_of(const std::string& label) const;

    void validate() const;
    static ToyWorldSpec from_json(const nlohmann::json& j);
    static ToyWorldSpec load_file(const std::string& path);
    nlohmann::json to_json() const;
};

/// Deterministic fill-mask lookup: context override if present, else the
/// global lexicon ranking (score descending, ties lexicographic).
class ToyProposer final : public TokenProposer {
public:
    ToyProposer(std::shared_ptr<const ToyWorldSpec> world, std::string mask_sentinel);
    std::vector<TokenProposal> propose_tokens(const std::string& masked_text,
                                              int top_k) override;

private:
    std::shared_ptr<const ToyWorldSpec> world_;
    std::string mask_sentinel_;
};

/// Emits trigger-rule templates for the prompt's condition, confusion
/// templates otherwise; optionally swaps texts to a random other condition at
/// `noise_rate` (seeded, so outputs are a pure function of prompt and seed).
class ToyGenerator final : public TextGenerator {
public:
    explicit ToyGenerator(std::shared_ptr<const ToyWorldSpec> world);
    std::vector<std::string> generate_texts(const std::string& conditional_prompt,
                                            const GenerationParams& params) override;

private:
    std::shared_ptr<const ToyWorldSpec> world_;
};

/// First matching keyword wins, scanning text tokens left to right; tokens
/// are lowercased and stripped of surrounding punctuation before matching.
class ToyClassifier final : public ConditionClassifier {
public:
    explicit ToyClassifier(std::shared_ptr<const ToyWorldSpec> world);
    std::vector<ClassifierVerdict> classify_texts(
        const std::vector<std::string>& texts) override;

private:
    std::shared_ptr<const ToyWorldSpec> world_;
};

BackendSuite make_toy_backends(std::shared_ptr<const ToyWorldSpec> world,
                               const std::string& mask_sentinel);

}  // namespace promptevo::sim
