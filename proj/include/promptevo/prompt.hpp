#pragma once

#include <optional>
#include <string>
#include <vector>

#include "promptevo/backend.hpp"
#include "promptevo/errors.hpp"

namespace promptevo {

enum class TokenKind { word, placeholder };

/// One prompt token. Word tokens carry their surface form (non-empty, no
/// whitespace); the placeholder renders as the condition label.
struct PromptToken {
    TokenKind kind = TokenKind::word;
    std::string surface;

    static PromptToken word(std::string s) { return {TokenKind::word, std::move(s)}; }
    static PromptToken make_placeholder() { return {TokenKind::placeholder, {}}; }

    bool operator==(const PromptToken&) const = default;
};

enum class MutationOp { addition, replacement, removal };

std::string_view op_name(MutationOp op);       // "Addition" / "Replacement" / "Removal"
std::string_view op_abbrev(MutationOp op);     // "Add." / "Repl." / "Rem." (report tables)
MutationOp op_from_name(std::string_view name);

/// Records how a child was derived from its parent: the operator, the gap
/// index (Addition) or word index (Replacement/Removal), and the token that
/// was inserted or substituted. Replaying the descriptor against the parent
/// must reproduce the child exactly.
struct OperationDescriptor {
    MutationOp op = MutationOp::addition;
    std::size_t position = 0;
    std::optional<std::string> token;  // absent for Removal

    bool operator==(const OperationDescriptor&) const = default;
};

struct Lineage {
    std::string parent_id;
    OperationDescriptor descriptor;
};

/// Ordered token sequence with exactly one placeholder, pinned to the final
/// position. Immutable in practice: mutation operators return new values.
struct Prompt {
    std::vector<PromptToken> tokens;
    std::string id;
    std::optional<Lineage> lineage;

    /// Number of mutable (Word) tokens; the placeholder is never mutated.
    std::size_t word_count() const { return tokens.empty() ? 0 : tokens.size() - 1; }

    const std::string& word_at(std::size_t index) const { return tokens.at(index).surface; }

    std::vector<std::string> words() const;

    /// Canonical text form: words joined by single spaces, the placeholder
    /// rendered as `sentinel`. tokenize_prompt(text_form(p, s), s) == p.
    std::string text_form(const std::string& sentinel) const;

    bool same_tokens(const Prompt& other) const { return tokens == other.tokens; }
};

/// A prompt instantiated with one condition label; the string the generator sees.
struct ConditionalPrompt {
    std::string source_prompt_id;
    std::string condition;
    std::string text;
};

/// Splits `raw` on whitespace; the segment equal to `placeholder_sentinel`
/// becomes the placeholder, which must appear exactly once and last.
Prompt tokenize_prompt(const std::string& raw, const std::string& placeholder_sentinel);

/// Renders the prompt for one condition of `label_set`.
ConditionalPrompt render(const Prompt& prompt, const std::string& condition,
                         const std::vector<std::string>& label_set);

/// Builds the fill-mask query for an operation: the prompt's word sequence
/// (placeholder omitted) with `mask_sentinel` inserted at the gap or
/// substituted at the word index.
std::string mask_query_for_addition(const Prompt& prompt, std::size_t gap,
                                    const std::string& mask_sentinel);
std::string mask_query_for_replacement(const Prompt& prompt, std::size_t index,
                                       const std::string& mask_sentinel);

/// The three operators. Addition/Replacement take the proposer's top-1 token
/// for the masked position. The returned child's lineage records the
/// descriptor; the parent is left untouched.
Prompt apply_addition(const Prompt& prompt, std::size_t gap, TokenProposer& proposer,
                      const std::string& mask_sentinel);
Prompt apply_replacement(const Prompt& prompt, std::size_t index, TokenProposer& proposer,
                         const std::string& mask_sentinel);
Prompt apply_removal(const Prompt& prompt, std::size_t index);

/// Pure replay of a recorded descriptor; needs no proposer.
Prompt apply_descriptor(const Prompt& parent, const OperationDescriptor& descriptor);

struct ChildBatch {
    std::vector<Prompt> children;
    std::vector<std::string> warnings;  // skipped positions (failed proposals)
};

/// All children of one iteration, in deterministic order: Additions by gap
/// (0..T), then Replacements by index, then Removals by index. Children whose
/// token sequence equals the parent's or an earlier child's are dropped, so
/// the batch holds at most 3T+1 prompts. A failed proposal skips that child
/// and records a warning instead of aborting the batch.
ChildBatch expand_children(const Prompt& prompt, TokenProposer& proposer,
                           const std::string& mask_sentinel);

}  // namespace promptevo
