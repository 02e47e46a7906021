#pragma once

#include <memory>
#include <string>
#include <vector>

#include "promptevo/backend.hpp"

namespace promptevo {

/// Transport settings shared by the three clients.
struct HttpClientOptions {
    int timeout_ms = 5000;
    int retries = 2;          // attempts = 1 + retries
    int backoff_base_ms = 100;  // doubles per retry
    int concurrency_limit = 4;  // max in-flight requests per backend
    std::string bearer_token;   // optional static token
};

namespace detail {
class BoundedPoster;  // shared transport with retry/backoff and a semaphore
}

class HttpTokenProposer final : public TokenProposer {
public:
    HttpTokenProposer(std::string base_url, std::string mask_sentinel,
                      const HttpClientOptions& options);
    ~HttpTokenProposer() override;
    std::vector<TokenProposal> propose_tokens(const std::string& masked_text,
                                              int top_k) override;

private:
    std::string mask_sentinel_;
    std::unique_ptr<detail::BoundedPoster> poster_;
};

class HttpTextGenerator final : public TextGenerator {
public:
    HttpTextGenerator(std::string base_url, const HttpClientOptions& options);
    ~HttpTextGenerator() override;
    std::vector<std::string> generate_texts(const std::string& conditional_prompt,
                                            const GenerationParams& params) override;

private:
    std::unique_ptr<detail::BoundedPoster> poster_;
};

class HttpConditionClassifier final : public ConditionClassifier {
public:
    HttpConditionClassifier(std::string base_url, std::vector<std::string> label_set,
                            const HttpClientOptions& options);
    ~HttpConditionClassifier() override;
    std::vector<ClassifierVerdict> classify_texts(
        const std::vector<std::string>& texts) override;

private:
    std::vector<std::string> label_set_;
    std::unique_ptr<detail::BoundedPoster> poster_;
};

/// True iff a plain GET against the base URL gets any HTTP response.
bool probe_backend(const std::string& base_url, int timeout_ms);

}  // namespace promptevo
