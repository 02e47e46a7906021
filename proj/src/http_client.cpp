#include "promptevo/http_client.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "promptevo/errors.hpp"
#include "promptevo/wire.hpp"

namespace promptevo {

namespace detail {

namespace {

/// Runtime-sized counting semaphore; std::counting_semaphore fixes its
/// ceiling at compile time.
class Semaphore {
public:
    explicit Semaphore(int count) : count_(std::max(count, 1)) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return count_ > 0; });
        --count_;
    }

    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++count_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int count_;
};

struct SemaphoreGuard {
    explicit SemaphoreGuard(Semaphore& s) : sem(s) { sem.acquire(); }
    ~SemaphoreGuard() { sem.release(); }
    Semaphore& sem;
};

}  // namespace

/// POSTs JSON with bounded concurrency, retrying transport failures, 5xx
/// statuses, and malformed bodies with exponential backoff. Application
/// errors (4xx with an error body, labels outside the configured set) are
/// surfaced immediately: the server answered deterministically, so retrying
/// cannot help. `validate` runs inside the retry loop; a MalformedResponse
/// it throws counts against the budget like any other wire failure.
class BoundedPoster {
public:
    BoundedPoster(std::string base_url, const HttpClientOptions& options)
        : base_url_(std::move(base_url)), options_(options), semaphore_(options.concurrency_limit) {}

    using Validator = std::function<void(const nlohmann::json&)>;

    nlohmann::json post(const char* path, const nlohmann::json& body,
                        const Validator& validate) {
        SemaphoreGuard guard(semaphore_);
        const int attempts = 1 + std::max(options_.retries, 0);
        Error last_error(ErrorCode::backend_unreachable, "no attempt made");
        for (int attempt = 0; attempt < attempts; ++attempt) {
            if (attempt > 0) {
                const auto delay = std::chrono::milliseconds(
                    static_cast<long long>(options_.backoff_base_ms) << (attempt - 1));
                std::this_thread::sleep_for(delay);
            }
            try {
                auto response = post_once(path, body);
                validate(response);
                return response;
            } catch (const Error& error) {
                if (error.code() != ErrorCode::backend_unreachable &&
                    error.code() != ErrorCode::malformed_response) {
                    throw;  // server-signaled application error
                }
                last_error = error;
            }
        }
        throw last_error;
    }

private:
    nlohmann::json post_once(const char* path, const nlohmann::json& body) {
        httplib::Client client(base_url_);
        client.set_connection_timeout(std::chrono::milliseconds(options_.timeout_ms));
        client.set_read_timeout(std::chrono::milliseconds(options_.timeout_ms));
        client.set_write_timeout(std::chrono::milliseconds(options_.timeout_ms));
        httplib::Headers headers;
        if (!options_.bearer_token.empty()) {
            headers.emplace("Authorization", "Bearer " + options_.bearer_token);
        }
        const auto result = client.Post(path, headers, body.dump(), "application/json");
        if (!result) {
            throw Error(ErrorCode::backend_unreachable,
                        base_url_ + path + ": " + httplib::to_string(result.error()));
        }
        if (result->status >= 500) {
            throw Error(ErrorCode::backend_unreachable,
                        base_url_ + path + ": server error " + std::to_string(result->status));
        }
        if (result->status >= 400) {
            throw wire::error_from_body(result->body);
        }
        try {
            return nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::malformed_response,
                        std::string("response is not JSON: ") + e.what());
        }
    }

    std::string base_url_;
    HttpClientOptions options_;
    Semaphore semaphore_;
};

}  // namespace detail

HttpTokenProposer::HttpTokenProposer(std::string base_url, std::string mask_sentinel,
                                     const HttpClientOptions& options)
    : mask_sentinel_(std::move(mask_sentinel)),
      poster_(std::make_unique<detail::BoundedPoster>(std::move(base_url), options)) {}

HttpTokenProposer::~HttpTokenProposer() = default;

std::vector<TokenProposal> HttpTokenProposer::propose_tokens(const std::string& masked_text,
                                                             int top_k) {
    if (top_k < 1) {
        throw Error(ErrorCode::config_invalid, "top_k must be >= 1");
    }
    std::size_t occurrences = 0;
    for (std::size_t pos = masked_text.find(mask_sentinel_); pos != std::string::npos;
         pos = masked_text.find(mask_sentinel_, pos + mask_sentinel_.size())) {
        ++occurrences;
    }
    if (occurrences != 1) {
        throw Error(ErrorCode::no_mask_in_request,
                    "masked text must contain '" + mask_sentinel_ + "' exactly once");
    }
    const auto response = poster_->post(
        wire::kFillMaskPath,
        wire::to_json(wire::FillMaskRequest{masked_text, mask_sentinel_, top_k}),
        [](const nlohmann::json& j) {
            const auto proposals = wire::proposals_from_json(j);
            for (std::size_t i = 0; i < proposals.size(); ++i) {
                if (proposals[i].token.empty()) {
                    throw Error(ErrorCode::malformed_response, "empty token in proposal list");
                }
                if (i > 0 && proposals[i].score > proposals[i - 1].score) {
                    throw Error(ErrorCode::malformed_response,
                                "proposal scores not sorted descending");
                }
            }
        });
    return wire::proposals_from_json(response);
}

HttpTextGenerator::HttpTextGenerator(std::string base_url, const HttpClientOptions& options)
    : poster_(std::make_unique<detail::BoundedPoster>(std::move(base_url), options)) {}

HttpTextGenerator::~HttpTextGenerator() = default;

std::vector<std::string> HttpTextGenerator::generate_texts(const std::string& conditional_prompt,
                                                           const GenerationParams& params) {
    params.validate();  // num_return > beam_size never reaches the wire
    if (conditional_prompt.empty()) {
        throw Error(ErrorCode::config_invalid, "conditional prompt must be non-empty");
    }
    const auto response = poster_->post(
        wire::kGeneratePath, wire::to_json(wire::GenerateRequest{conditional_prompt, params}),
        [](const nlohmann::json& j) { wire::texts_from_json(j); });
    auto texts = wire::texts_from_json(response);
    if (texts.empty()) {
        throw Error(ErrorCode::empty_generation, "backend returned no texts");
    }
    if (texts.size() > static_cast<std::size_t>(params.num_return)) {
        texts.resize(static_cast<std::size_t>(params.num_return));
    }
    return texts;
}

HttpConditionClassifier::HttpConditionClassifier(std::string base_url,
                                                 std::vector<std::string> label_set,
                                                 const HttpClientOptions& options)
    : label_set_(std::move(label_set)),
      poster_(std::make_unique<detail::BoundedPoster>(std::move(base_url), options)) {}

HttpConditionClassifier::~HttpConditionClassifier() = default;

std::vector<ClassifierVerdict> HttpConditionClassifier::classify_texts(
    const std::vector<std::string>& texts) {
    if (texts.empty()) {
        throw Error(ErrorCode::config_invalid, "classify batch must be non-empty");
    }
    const std::size_t expected = texts.size();
    const auto response = poster_->post(
        wire::kClassifyPath, wire::to_json(wire::ClassifyRequest{texts, label_set_}),
        [expected](const nlohmann::json& j) {
            if (wire::labels_from_json(j).size() != expected) {
                throw Error(ErrorCode::malformed_response,
                            "classifier label count does not match text count");
            }
        });
    const auto labels = wire::labels_from_json(response);
    std::vector<ClassifierVerdict> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        if (std::find(label_set_.begin(), label_set_.end(), labels[i]) == label_set_.end()) {
            throw Error(ErrorCode::unknown_label_from_server,
                        "label '" + labels[i] + "' is outside the configured set");
        }
        out.push_back({texts[i], labels[i]});
    }
    return out;
}

bool probe_backend(const std::string& base_url, int timeout_ms) {
    httplib::Client client(base_url);
    client.set_connection_timeout(std::chrono::milliseconds(timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(timeout_ms));
    const auto result = client.Get("/");
    return static_cast<bool>(result);
}

}  // namespace promptevo
