#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace promptevo {

enum class ExecMode { serial, parallel };

/// How the data-parallel kernels (child evaluation, oracle enumeration) run.
/// The serial path is the reference; the OpenMP path must produce identical
/// results, which the test suite asserts.
struct ExecPolicy {
    ExecMode mode = ExecMode::serial;
    int threads = 4;

    static ExecPolicy serial_ref() { return {ExecMode::serial, 1}; }
    static ExecPolicy parallel_omp(int threads = 4) { return {ExecMode::parallel, threads}; }
};

/// Runs f(i) for i in [0, n). Results must be written to index-addressed
/// storage by the caller; completion order carries no meaning. If any f(i)
/// throws, the exception from the lowest index is rethrown once the loop
/// finishes, so error propagation is schedule-independent.
template <typename F>
void for_each_index(const ExecPolicy& policy, std::size_t n, F&& f) {
#ifdef _OPENMP
    if (policy.mode == ExecMode::parallel && n > 1) {
        std::exception_ptr error;
        std::size_t error_index = n;
        std::mutex error_mutex;
        const int threads = policy.threads > 0 ? policy.threads : 1;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                f(static_cast<std::size_t>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (static_cast<std::size_t>(i) < error_index) {
                    error_index = static_cast<std::size_t>(i);
                    error = std::current_exception();
                }
            }
        }
        if (error) std::rethrow_exception(error);
        return;
    }
#endif
    (void)policy;
    for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace promptevo
