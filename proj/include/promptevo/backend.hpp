#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace promptevo {

/// One fill-mask candidate. Responses are score-sorted, highest first.
struct TokenProposal {
    std::string token;
    double score = 0.0;

    bool operator==(const TokenProposal&) const = default;
};

/// Generation parameters, passed to the backend verbatim.
struct GenerationParams {
    int num_return = 3;
    int beam_size = 30;
    double temperature = 0.7;
    double top_p = 0.7;
    int no_repeat_ngram = 2;
    std::optional<std::uint64_t> seed;  // honored by deterministic backends

    void validate() const;  // throws ConfigInvalid; checked before any wire call
};

struct ClassifierVerdict {
    std::string text;
    std::string label;
};

/// The masked-LM backend behind Addition/Replacement proposals.
class TokenProposer {
public:
    virtual ~TokenProposer() = default;
    /// `masked_text` holds exactly one mask sentinel. Returns at most `top_k`
    /// proposals, scores non-increasing.
    virtual std::vector<TokenProposal> propose_tokens(const std::string& masked_text,
                                                      int top_k) = 0;
};

class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    /// Returns between 1 and params.num_return texts, treated as unordered
    /// candidates of equal standing.
    virtual std::vector<std::string> generate_texts(const std::string& conditional_prompt,
                                                    const GenerationParams& params) = 0;
};

class ConditionClassifier {
public:
    virtual ~ConditionClassifier() = default;
    /// One verdict per input, order-aligned with `texts`.
    virtual std::vector<ClassifierVerdict> classify_texts(
        const std::vector<std::string>& texts) = 0;
};

/// The three pluggable model interfaces an optimization run needs.
struct BackendSuite {
    std::shared_ptr<TokenProposer> proposer;
    std::shared_ptr<TextGenerator> generator;
    std::shared_ptr<ConditionClassifier> classifier;
};

}  // namespace promptevo
