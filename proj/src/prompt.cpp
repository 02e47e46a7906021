#include "promptevo/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace promptevo {

namespace {

std::vector<std::string> split_whitespace(const std::string& raw) {
    std::vector<std::string> segments;
    std::istringstream stream(raw);
    std::string segment;
    while (stream >> segment) segments.push_back(segment);
    return segments;
}

bool is_punct_only(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::ispunct(c) != 0; });
}

/// Applies the proposal hygiene rules: whitespace-bearing proposals are split
/// and only the first segment used; empty or punctuation-only proposals are
/// rejected. Case is preserved verbatim.
std::string sanitize_proposal(const std::vector<TokenProposal>& proposals) {
    if (proposals.empty()) {
        throw Error(ErrorCode::proposer_empty, "backend returned no proposals");
    }
    const auto segments = split_whitespace(proposals.front().token);
    if (segments.empty() || is_punct_only(segments.front())) {
        throw Error(ErrorCode::proposer_empty,
                    "unusable proposal '" + proposals.front().token + "'");
    }
    return segments.front();
}

void check_word_index(const Prompt& prompt, std::size_t index) {
    if (index >= prompt.tokens.size()) {
        throw Error(ErrorCode::placeholder_targeted, "index out of range");
    }
    if (prompt.tokens[index].kind == TokenKind::placeholder) {
        throw Error(ErrorCode::placeholder_targeted, "the placeholder cannot be mutated");
    }
}

}  // namespace

std::string_view op_name(MutationOp op) {
    switch (op) {
        case MutationOp::addition: return "Addition";
        case MutationOp::replacement: return "Replacement";
        case MutationOp::removal: return "Removal";
    }
    return "?";
}

std::string_view op_abbrev(MutationOp op) {
    switch (op) {
        case MutationOp::addition: return "Add.";
        case MutationOp::replacement: return "Repl.";
        case MutationOp::removal: return "Rem.";
    }
    return "?";
}

MutationOp op_from_name(std::string_view name) {
    if (name == "Addition") return MutationOp::addition;
    if (name == "Replacement") return MutationOp::replacement;
    if (name == "Removal") return MutationOp::removal;
    throw Error(ErrorCode::corrupt_log, "unknown operation '" + std::string(name) + "'");
}

std::vector<std::string> Prompt::words() const {
    std::vector<std::string> out;
    out.reserve(word_count());
    for (const auto& token : tokens) {
        if (token.kind == TokenKind::word) out.push_back(token.surface);
    }
    return out;
}

std::string Prompt::text_form(const std::string& sentinel) const {
    std::string out;
    for (const auto& token : tokens) {
        if (!out.empty()) out += ' ';
        out += token.kind == TokenKind::word ? token.surface : sentinel;
    }
    return out;
}

Prompt tokenize_prompt(const std::string& raw, const std::string& placeholder_sentinel) {
    const auto segments = split_whitespace(raw);
    if (segments.empty()) {
        throw Error(ErrorCode::empty_prompt, "prompt is empty");
    }
    std::size_t placeholder_count = 0;
    std::size_t placeholder_index = 0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i] == placeholder_sentinel) {
            ++placeholder_count;
            placeholder_index = i;
        }
    }
    if (placeholder_count == 0) {
        throw Error(ErrorCode::zero_placeholders,
                    "prompt must contain the placeholder '" + placeholder_sentinel + "' once");
    }
    if (placeholder_count > 1) {
        throw Error(ErrorCode::multiple_placeholders,
                    "prompt contains the placeholder more than once");
    }
    if (placeholder_index + 1 != segments.size()) {
        throw Error(ErrorCode::placeholder_not_final,
                    "the placeholder must be the final token");
    }
    if (segments.size() == 1) {
        throw Error(ErrorCode::empty_prompt, "prompt has no mutable tokens");
    }
    Prompt prompt;
    prompt.tokens.reserve(segments.size());
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        prompt.tokens.push_back(PromptToken::word(segments[i]));
    }
    prompt.tokens.push_back(PromptToken::make_placeholder());
    return prompt;
}

ConditionalPrompt render(const Prompt& prompt, const std::string& condition,
                         const std::vector<std::string>& label_set) {
    if (std::find(label_set.begin(), label_set.end(), condition) == label_set.end()) {
        throw Error(ErrorCode::unknown_condition,
                    "'" + condition + "' is not in the configured label set");
    }
    return ConditionalPrompt{prompt.id, condition, prompt.text_form(condition)};
}

std::string mask_query_for_addition(const Prompt& prompt, std::size_t gap,
                                    const std::string& mask_sentinel) {
    const auto words = prompt.words();
    if (gap > words.size()) {
        throw Error(ErrorCode::config_invalid, "addition gap out of range");
    }
    std::string out;
    for (std::size_t i = 0; i <= words.size(); ++i) {
        if (i == gap) {
            if (!out.empty()) out += ' ';
            out += mask_sentinel;
        }
        if (i < words.size()) {
            if (!out.empty()) out += ' ';
            out += words[i];
        }
    }
    return out;
}

std::string mask_query_for_replacement(const Prompt& prompt, std::size_t index,
                                       const std::string& mask_sentinel) {
    const auto words = prompt.words();
    if (index >= words.size()) {
        throw Error(ErrorCode::placeholder_targeted, "replacement index out of range");
    }
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (!out.empty()) out += ' ';
        out += i == index ? mask_sentinel : words[i];
    }
    return out;
}

Prompt apply_addition(const Prompt& prompt, std::size_t gap, TokenProposer& proposer,
                      const std::string& mask_sentinel) {
    const std::string query = mask_query_for_addition(prompt, gap, mask_sentinel);
    const std::string token = sanitize_proposal(proposer.propose_tokens(query, 1));
    OperationDescriptor descriptor{MutationOp::addition, gap, token};
    Prompt child = apply_descriptor(prompt, descriptor);
    child.lineage = Lineage{prompt.id, descriptor};
    return child;
}

Prompt apply_replacement(const Prompt& prompt, std::size_t index, TokenProposer& proposer,
                         const std::string& mask_sentinel) {
    check_word_index(prompt, index);
    const std::string query = mask_query_for_replacement(prompt, index, mask_sentinel);
    const std::string token = sanitize_proposal(proposer.propose_tokens(query, 1));
    OperationDescriptor descriptor{MutationOp::replacement, index, token};
    Prompt child = apply_descriptor(prompt, descriptor);
    child.lineage = Lineage{prompt.id, descriptor};
    return child;
}

Prompt apply_removal(const Prompt& prompt, std::size_t index) {
    check_word_index(prompt, index);
    if (prompt.word_count() < 2) {
        throw Error(ErrorCode::would_empty_prompt,
                    "removal would leave a prompt with no mutable tokens");
    }
    OperationDescriptor descriptor{MutationOp::removal, index, std::nullopt};
    Prompt child = apply_descriptor(prompt, descriptor);
    child.lineage = Lineage{prompt.id, descriptor};
    return child;
}

Prompt apply_descriptor(const Prompt& parent, const OperationDescriptor& descriptor) {
    Prompt child;
    child.tokens = parent.tokens;
    switch (descriptor.op) {
        case MutationOp::addition:
            if (descriptor.position > parent.word_count() || !descriptor.token) {
                throw Error(ErrorCode::lineage_mismatch, "invalid addition descriptor");
            }
            child.tokens.insert(child.tokens.begin() + static_cast<long>(descriptor.position),
                                PromptToken::word(*descriptor.token));
            break;
        case MutationOp::replacement:
            if (descriptor.position >= parent.word_count() || !descriptor.token) {
                throw Error(ErrorCode::lineage_mismatch, "invalid replacement descriptor");
            }
            child.tokens[descriptor.position] = PromptToken::word(*descriptor.token);
            break;
        case MutationOp::removal:
            if (descriptor.position >= parent.word_count() || descriptor.token) {
                throw Error(ErrorCode::lineage_mismatch, "invalid removal descriptor");
            }
            child.tokens.erase(child.tokens.begin() + static_cast<long>(descriptor.position));
            break;
    }
    return child;
}

ChildBatch expand_children(const Prompt& prompt, TokenProposer& proposer,
                           const std::string& mask_sentinel) {
    ChildBatch batch;
    std::vector<std::vector<PromptToken>> seen{prompt.tokens};
    auto push_unique = [&](Prompt child) {
        for (const auto& tokens : seen) {
            if (tokens == child.tokens) return;
        }
        seen.push_back(child.tokens);
        batch.children.push_back(std::move(child));
    };
    auto warn = [&](MutationOp op, std::size_t position, const Error& error) {
        batch.warnings.push_back(std::string(op_name(op)) + " at " +
                                 std::to_string(position) + " skipped: " + error.what());
    };

    const std::size_t words = prompt.word_count();
    for (std::size_t gap = 0; gap <= words; ++gap) {
        try {
            push_unique(apply_addition(prompt, gap, proposer, mask_sentinel));
        } catch (const Error& error) {
            warn(MutationOp::addition, gap, error);
        }
    }
    for (std::size_t index = 0; index < words; ++index) {
        try {
            push_unique(apply_replacement(prompt, index, proposer, mask_sentinel));
        } catch (const Error& error) {
            warn(MutationOp::replacement, index, error);
        }
    }
    if (words >= 2) {
        for (std::size_t index = 0; index < words; ++index) {
            push_unique(apply_removal(prompt, index));
        }
    }
    return batch;
}

}  // namespace promptevo
