#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "promptevo/sim_world.hpp"

namespace promptevo {

/// Failure injection for wire-conformance tests.
enum class FailureMode {
    none,
    http500,      // transient server error
    malformed,    // 200 with a body missing the required fields
    empty_texts,  // generate answers {"texts": []}
    alien_label,  // classify answers a label outside any sane set
};

/// In-process HTTP server implementing the three endpoints on top of a toy
/// world. Tests drive failure injection and introspection through the C++
/// API; the standalone binary exposes the same controls under /admin/*.
class MockServer {
public:
    explicit MockServer(sim::ToyWorldSpec world);
    ~MockServer();

    MockServer(const MockServer&) = delete;
    MockServer& operator=(const MockServer&) = delete;

    /// Binds 127.0.0.1 on a free port (or `port` if nonzero) and serves from
    /// a background thread until stop() or destruction.
    void start(int port = 0);
    void stop();

    int port() const;
    std::string base_url() const;

    /// The next `times` requests against `endpoint` ("fill_mask", "generate",
    /// "classify") fail with `mode` before normal handling resumes.
    void inject_failure(const std::string& endpoint, FailureMode mode, int times);

    /// Every request sleeps uniform(0, max_ms) milliseconds first; results
    /// must not depend on it.
    void set_random_delay(int max_ms, std::uint64_t seed);

    long request_count(const std::string& endpoint) const;
    nlohmann::json last_request(const std::string& endpoint) const;
    void reset_counters();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace promptevo
