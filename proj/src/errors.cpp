#include "promptevo/errors.hpp"

namespace promptevo {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::zero_placeholders: return "ZeroPlaceholders";
        case ErrorCode::multiple_placeholders: return "MultiplePlaceholders";
        case ErrorCode::empty_prompt: return "EmptyPrompt";
        case ErrorCode::placeholder_not_final: return "PlaceholderNotFinal";
        case ErrorCode::placeholder_targeted: return "PlaceholderTargeted";
        case ErrorCode::would_empty_prompt: return "WouldEmptyPrompt";
        case ErrorCode::unknown_condition: return "UnknownCondition";
        case ErrorCode::proposer_unavailable: return "ProposerUnavailable";
        case ErrorCode::proposer_empty: return "ProposerEmpty";
        case ErrorCode::empty_text: return "EmptyText";
        case ErrorCode::length_mismatch: return "LengthMismatch";
        case ErrorCode::unknown_label: return "UnknownLabel";
        case ErrorCode::backend_unreachable: return "BackendUnreachable";
        case ErrorCode::malformed_response: return "MalformedResponse";
        case ErrorCode::no_mask_in_request: return "NoMaskInRequest";
        case ErrorCode::empty_generation: return "EmptyGeneration";
        case ErrorCode::unknown_label_from_server: return "UnknownLabelFromServer";
        case ErrorCode::neighborhood_too_large: return "NeighborhoodTooLarge";
        case ErrorCode::empty_pool: return "EmptyPool";
        case ErrorCode::corrupt_log: return "CorruptLog";
        case ErrorCode::lineage_mismatch: return "LineageMismatch";
        case ErrorCode::config_invalid: return "ConfigInvalid";
    }
    return "UnknownError";
}

}  // namespace promptevo
