#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace promptevo {

enum class ErrorCode {
    // prompt construction / mutation
    zero_placeholders,
    multiple_placeholders,
    empty_prompt,
    placeholder_not_final,
    placeholder_targeted,
    would_empty_prompt,
    unknown_condition,
    proposer_unavailable,
    proposer_empty,
    // metrics
    empty_text,
    length_mismatch,
    unknown_label,
    // wire protocol
    backend_unreachable,
    malformed_response,
    no_mask_in_request,
    empty_generation,
    unknown_label_from_server,
    // search
    neighborhood_too_large,
    empty_pool,
    // persistence
    corrupt_log,
    lineage_mismatch,
    // configuration
    config_invalid,
};

std::string_view to_string(ErrorCode code);

/// Typed error carrying the code every CLI exit path and test asserts on.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace promptevo
