#include "promptevo/mock_server.hpp"

#include <chrono>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "promptevo/rng.hpp"
#include "promptevo/wire.hpp"

namespace promptevo {

namespace {

FailureMode mode_from_string(const std::string& name) {
    if (name == "http500") return FailureMode::http500;
    if (name == "malformed") return FailureMode::malformed;
    if (name == "empty_texts") return FailureMode::empty_texts;
    if (name == "alien_label") return FailureMode::alien_label;
    return FailureMode::none;
}

}  // namespace

struct MockServer::Impl {
    explicit Impl(sim::ToyWorldSpec spec)
        : world(std::make_shared<const sim::ToyWorldSpec>(std::move(spec))),
          generator(world),
          classifier(world) {}

    std::shared_ptr<const sim::ToyWorldSpec> world;
    sim::ToyGenerator generator;
    sim::ToyClassifier classifier;

    httplib::Server server;
    std::thread thread;
    int port = 0;

    mutable std::mutex mutex;
    std::map<std::string, std::pair<FailureMode, int>> injected;  // endpoint -> (mode, times)
    std::map<std::string, long> counters;
    std::map<std::string, nlohmann::json> last_requests;
    int delay_max_ms = 0;
    std::uint64_t delay_state = 0;

    /// Returns the pending failure for the endpoint, consuming one charge.
    FailureMode consume_failure(const std::string& endpoint) {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = injected.find(endpoint);
        if (it == injected.end() || it->second.second <= 0) return FailureMode::none;
        --it->second.second;
        return it->second.first;
    }

    void before(const std::string& endpoint, const std::string& body) {
        int delay = 0;
        {
            std::lock_guard<std::mutex> lock(mutex);
            ++counters[endpoint];
            try {
                last_requests[endpoint] = nlohmann::json::parse(body);
            } catch (const nlohmann::json::exception&) {
                last_requests[endpoint] = nlohmann::json{{"unparseable", body}};
            }
            if (delay_max_ms > 0) {
                delay = static_cast<int>(splitmix64(delay_state) %
                                         static_cast<std::uint64_t>(delay_max_ms + 1));
            }
        }
        if (delay > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }

    static void reply_json(httplib::Response& res, const nlohmann::json& j, int status = 200) {
        res.status = status;
        res.set_content(j.dump(), "application/json");
    }

    static void reply_error(httplib::Response& res, ErrorCode code, const std::string& message) {
        reply_json(res, wire::error_body(code, message), 400);
    }

    /// Applies an injected failure; true means the response is already set.
    bool maybe_fail(const std::string& endpoint, httplib::Response& res) {
        switch (consume_failure(endpoint)) {
            case FailureMode::none:
                return false;
            case FailureMode::http500:
                res.status = 500;
                res.set_content("injected failure", "text/plain");
                return true;
            case FailureMode::malformed:
                reply_json(res, nlohmann::json{{"unexpected", true}});
                return true;
            case FailureMode::empty_texts:
                reply_json(res, nlohmann::json{{"texts", nlohmann::json::array()}});
                return true;
            case FailureMode::alien_label:
                return false;  // handled inside classify
        }
        return false;
    }

    void setup_routes() {
        server.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("promptevo mock backend", "text/plain");
        });

        server.Post(wire::kFillMaskPath, [this](const httplib::Request& req,
                                                httplib::Response& res) {
            before("fill_mask", req.body);
            if (maybe_fail("fill_mask", res)) return;
            try {
                const auto request = wire::fill_mask_request_from_json(nlohmann::json::parse(req.body));
                if (request.top_k < 1) {
                    reply_error(res, ErrorCode::config_invalid, "top_k must be >= 1");
                    return;
                }
                sim::ToyProposer proposer(world, request.mask_sentinel);
                reply_json(res, wire::proposals_to_json(
                                    proposer.propose_tokens(request.text, request.top_k)));
            } catch (const Error& error) {
                reply_error(res, error.code(), error.what());
            } catch (const nlohmann::json::exception& e) {
                reply_error(res, ErrorCode::malformed_response, e.what());
            }
        });

        server.Post(wire::kGeneratePath, [this](const httplib::Request& req,
                                                httplib::Response& res) {
            before("generate", req.body);
            if (maybe_fail("generate", res)) return;
            try {
                const auto request = wire::generate_request_from_json(nlohmann::json::parse(req.body));
                reply_json(res, wire::texts_to_json(
                                    generator.generate_texts(request.prompt, request.params)));
            } catch (const Error& error) {
                reply_error(res, error.code(), error.what());
            } catch (const nlohmann::json::exception& e) {
                reply_error(res, ErrorCode::malformed_response, e.what());
            }
        });

        server.Post(wire::kClassifyPath, [this](const httplib::Request& req,
                                                httplib::Response& res) {
            before("classify", req.body);
            const bool alien = consume_failure("classify") == FailureMode::alien_label;
            if (!alien && maybe_fail("classify", res)) return;
            try {
                const auto request = wire::classify_request_from_json(nlohmann::json::parse(req.body));
                if (request.texts.empty()) {
                    reply_error(res, ErrorCode::config_invalid, "texts must be non-empty");
                    return;
                }
                std::vector<std::string> labels;
                if (alien) {
                    labels.assign(request.texts.size(), "??not-a-label??");
                } else {
                    for (const auto& verdict : classifier.classify_texts(request.texts)) {
                        labels.push_back(verdict.label);
                    }
                }
                reply_json(res, wire::labels_to_json(labels));
            } catch (const Error& error) {
                reply_error(res, error.code(), error.what());
            } catch (const nlohmann::json::exception& e) {
                reply_error(res, ErrorCode::malformed_response, e.what());
            }
        });

        // Admin controls mirror the C++ API for the standalone binary.
        server.Post("/admin/inject", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                const auto j = nlohmann::json::parse(req.body);
                std::lock_guard<std::mutex> lock(mutex);
                injected[j.at("endpoint").get<std::string>()] = {
                    mode_from_string(j.at("mode").get<std::string>()), j.at("times").get<int>()};
                reply_json(res, {{"ok", true}});
            } catch (const nlohmann::json::exception& e) {
                reply_error(res, ErrorCode::malformed_response, e.what());
            }
        });
        server.Post("/admin/delay", [this](const httplib::Request& req, httplib::Response& res) {
            try {
                const auto j = nlohmann::json::parse(req.body);
                std::lock_guard<std::mutex> lock(mutex);
                delay_max_ms = j.at("max_ms").get<int>();
                delay_state = j.value("seed", std::uint64_t{0});
                reply_json(res, {{"ok", true}});
            } catch (const nlohmann::json::exception& e) {
                reply_error(res, ErrorCode::malformed_response, e.what());
            }
        });
        server.Get("/admin/requests", [this](const httplib::Request&, httplib::Response& res) {
            std::lock_guard<std::mutex> lock(mutex);
            reply_json(res, {{"counts", counters}, {"last", last_requests}});
        });
    }
};

MockServer::MockServer(sim::ToyWorldSpec world) : impl_(std::make_unique<Impl>(std::move(world))) {
    impl_->setup_routes();
}

MockServer::~MockServer() { stop(); }

void MockServer::start(int port) {
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    } else {
        impl_->server.bind_to_port("127.0.0.1", port);
        impl_->port = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void MockServer::stop() {
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

int MockServer::port() const { return impl_->port; }

std::string MockServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port);
}

void MockServer::inject_failure(const std::string& endpoint, FailureMode mode, int times) {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->injected[endpoint] = {mode, times};
}

void MockServer::set_random_delay(int max_ms, std::uint64_t seed) {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->delay_max_ms = max_ms;
    impl_->delay_state = seed;
}

long MockServer::request_count(const std::string& endpoint) const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    const auto it = impl_->counters.find(endpoint);
    return it == impl_->counters.end() ? 0 : it->second;
}

nlohmann::json MockServer::last_request(const std::string& endpoint) const {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    const auto it = impl_->last_requests.find(endpoint);
    return it == impl_->last_requests.end() ? nlohmann::json{} : it->second;
}

void MockServer::reset_counters() {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    impl_->counters.clear();
    impl_->last_requests.clear();
}

}  // namespace promptevo
