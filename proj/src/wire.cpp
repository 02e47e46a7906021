#include "promptevo/wire.hpp"

namespace promptevo::wire {

namespace {

ErrorCode code_from_string(const std::string& name) {
    if (name == "no_mask_in_request") return ErrorCode::no_mask_in_request;
    if (name == "empty_generation") return ErrorCode::empty_generation;
    if (name == "unknown_label") return ErrorCode::unknown_label_from_server;
    if (name == "config_invalid") return ErrorCode::config_invalid;
    return ErrorCode::malformed_response;
}

std::string code_to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::no_mask_in_request: return "no_mask_in_request";
        case ErrorCode::empty_generation: return "empty_generation";
        case ErrorCode::unknown_label_from_server: return "unknown_label";
        case ErrorCode::config_invalid: return "config_invalid";
        default: return "internal";
    }
}

}  // namespace

nlohmann::json to_json(const FillMaskRequest& request) {
    return {{"text", request.text},
            {"mask_sentinel", request.mask_sentinel},
            {"top_k", request.top_k}};
}

nlohmann::json to_json(const GenerateRequest& request) {
    nlohmann::json j{{"prompt", request.prompt},
                     {"num_return", request.params.num_return},
                     {"beam_size", request.params.beam_size},
                     {"temperature", request.params.temperature},
                     {"top_p", request.params.top_p},
                     {"no_repeat_ngram", request.params.no_repeat_ngram}};
    if (request.params.seed) j["seed"] = *request.params.seed;
    return j;
}

nlohmann::json to_json(const ClassifyRequest& request) {
    return {{"texts", request.texts}, {"label_set", request.label_set}};
}

FillMaskRequest fill_mask_request_from_json(const nlohmann::json& j) {
    try {
        return {j.at("text").get<std::string>(), j.at("mask_sentinel").get<std::string>(),
                j.at("top_k").get<int>()};
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_response, std::string("fill_mask request: ") + e.what());
    }
}

GenerateRequest generate_request_from_json(const nlohmann::json& j) {
    try {
        GenerateRequest request;
        request.prompt = j.at("prompt").get<std::string>();
        request.params.num_return = j.at("num_return").get<int>();
        request.params.beam_size = j.at("beam_size").get<int>();
        request.params.temperature = j.at("temperature").get<double>();
        request.params.top_p = j.at("top_p").get<double>();
        request.params.no_repeat_ngram = j.at("no_repeat_ngram").get<int>();
        if (j.contains("seed")) request.params.seed = j.at("seed").get<std::uint64_t>();
        return request;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_response, std::string("generate request: ") + e.what());
    }
}

ClassifyRequest classify_request_from_json(const nlohmann::json& j) {
    try {
        return {j.at("texts").get<std::vector<std::string>>(),
                j.at("label_set").get<std::vector<std::string>>()};
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_response, std::string("classify request: ") + e.what());
    }
}

nlohmann::json proposals_to_json(const std::vector<TokenProposal>& proposals) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& p : proposals) {
        list.push_back({{"token", p.token}, {"score", p.score}});
    }
    return {{"proposals", list}};
}

nlohmann::json texts_to_json(const std::vector<std::string>& texts) {
    return {{"texts", texts}};
}

nlohmann::json labels_to_json(const std::vector<std::string>& labels) {
    return {{"labels", labels}};
}

std::vector<TokenProposal> proposals_from_json(const nlohmann::json& j) {
    try {
        std::vector<TokenProposal> out;
        for (const auto& p : j.at("proposals")) {
            out.push_back({p.at("token").get<std::string>(), p.at("score").get<double>()});
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_response, std::string("fill_mask response: ") + e.what());
    }
}

std::vector<std::string> texts_from_json(const nlohmann::json& j) {
    try {
        return j.at("texts").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_response, std::string("generate response: ") + e.what());
    }
}

std::vector<std::string> labels_from_json(const nlohmann::json& j) {
    try {
        return j.at("labels").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::malformed_response, std::string("classify response: ") + e.what());
    }
}

nlohmann::json error_body(ErrorCode code, const std::string& message) {
    return {{"error", {{"code", code_to_string(code)}, {"message", message}}}};
}

Error error_from_body(const std::string& body) {
    try {
        const auto j = nlohmann::json::parse(body);
        const auto& error = j.at("error");
        return Error(code_from_string(error.at("code").get<std::string>()),
                     error.at("message").get<std::string>());
    } catch (const nlohmann::json::exception&) {
        return Error(ErrorCode::malformed_response, "unparseable error body: " + body);
    }
}

}  // namespace promptevo::wire
