#pragma once

#include <cstddef>
#include <string>

#include "promptevo/optimizer.hpp"

namespace promptevo {

struct OracleResult {
    Prompt best_prompt;
    double best_score = 0.0;
    Candidate best_candidate;
    std::size_t neighborhood_size = 0;  // distinct prompts within <= depth ops
    int depth = 0;
};

inline constexpr std::size_t kDefaultNeighborhoodCap = 1'000'000;

/// Exhaustively enumerates every prompt reachable from the seed by at most
/// `depth` mutation operations (proposals via the suite's proposer, so run it
/// against a noise-free toy world) and scores each one with the exact same
/// pipeline the optimizer uses. Ties break by fewer operations, then by the
/// lexicographically smaller rendered text. Ground truth for search tests:
/// the greedy optimizer can never beat it at matching depth.
OracleResult brute_force_best(const Prompt& seed, int depth, const BackendSuite& backends,
                              const OptimizerConfig& cfg,
                              std::size_t neighborhood_cap = kDefaultNeighborhoodCap);

}  // namespace promptevo
