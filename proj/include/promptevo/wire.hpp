#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "promptevo/backend.hpp"
#include "promptevo/errors.hpp"

namespace promptevo::wire {

// JSON-over-HTTP protocol, one POST endpoint per model interface:
//   /v1/fill_mask {text, mask_sentinel, top_k}            -> {proposals: [{token, score}]}
//   /v1/generate  {prompt, num_return, beam_size,
//                  temperature, top_p, no_repeat_ngram,
//                  seed?}                                 -> {texts: [...]}
//   /v1/classify  {texts: [...], label_set: [...]}        -> {labels: [...]}
// Application errors use HTTP 4xx with {"error": {"code", "message"}}.

inline constexpr const char* kFillMaskPath = "/v1/fill_mask";
inline constexpr const char* kGeneratePath = "/v1/generate";
inline constexpr const char* kClassifyPath = "/v1/classify";

struct FillMaskRequest {
    std::string text;
    std::string mask_sentinel;
    int top_k = 1;
};

struct GenerateRequest {
    std::string prompt;
    GenerationParams params;
};

struct ClassifyRequest {
    std::vector<std::string> texts;
    std::vector<std::string> label_set;
};

nlohmann::json to_json(const FillMaskRequest& request);
nlohmann::json to_json(const GenerateRequest& request);
nlohmann::json to_json(const ClassifyRequest& request);

FillMaskRequest fill_mask_request_from_json(const nlohmann::json& j);
GenerateRequest generate_request_from_json(const nlohmann::json& j);
ClassifyRequest classify_request_from_json(const nlohmann::json& j);

nlohmann::json proposals_to_json(const std::vector<TokenProposal>& proposals);
nlohmann::json texts_to_json(const std::vector<std::string>& texts);
nlohmann::json labels_to_json(const std::vector<std::string>& labels);

/// Throw MalformedResponse unless the body carries the expected fields.
std::vector<TokenProposal> proposals_from_json(const nlohmann::json& j);
std::vector<std::string> texts_from_json(const nlohmann::json& j);
std::vector<std::string> labels_from_json(const nlohmann::json& j);

nlohmann::json error_body(ErrorCode code, const std::string& message);
/// Recovers the typed error from a 4xx body; MalformedResponse if the body
/// does not follow the error schema.
Error error_from_body(const std::string& body);

}  // namespace promptevo::wire
