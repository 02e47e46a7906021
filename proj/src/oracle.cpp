#include "promptevo/oracle.hpp"

#include <unordered_set>

#include "promptevo/sim_world.hpp"

namespace promptevo {

OracleResult brute_force_best(const Prompt& seed, int depth, const BackendSuite& backends,
                              const OptimizerConfig& cfg, std::size_t neighborhood_cap) {
    if (depth < 1) {
        throw Error(ErrorCode::config_invalid, "oracle depth must be >= 1");
    }
    if (const auto* toy = dynamic_cast<const sim::ToyGenerator*>(backends.generator.get());
        toy == nullptr) {
        // Non-toy backends are allowed but at the caller's risk; nothing to check.
    }

    // Breadth-first enumeration, deduplicated on the token sequence. The
    // visit order is deterministic, so the reduction below is too.
    struct Node {
        Prompt prompt;
        int ops;
    };
    std::vector<Node> nodes{{seed, 0}};
    std::unordered_set<std::string> seen{seed.text_form(cfg.placeholder_sentinel)};
    std::size_t frontier_begin = 0;
    for (int level = 1; level <= depth; ++level) {
        const std::size_t frontier_end = nodes.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            ChildBatch batch =
                expand_children(nodes[i].prompt, *backends.proposer, cfg.mask_sentinel);
            for (auto& child : batch.children) {
                const std::string text = child.text_form(cfg.placeholder_sentinel);
                if (!seen.insert(text).second) continue;
                if (nodes.size() >= neighborhood_cap) {
                    throw Error(ErrorCode::neighborhood_too_large,
                                "neighborhood exceeds cap of " +
                                    std::to_string(neighborhood_cap) + " prompts");
                }
                child.id = "o" + std::to_string(nodes.size());
                nodes.push_back({std::move(child), level});
            }
        }
        frontier_begin = frontier_end;
    }

    std::vector<Prompt> prompts;
    prompts.reserve(nodes.size());
    for (const auto& node : nodes) prompts.push_back(node.prompt);
    const auto candidates = evaluate_prompts(prompts, backends, cfg);

    // argmax with the tie order (score desc, ops asc, rendered text asc);
    // a serial scan over the deterministic enumeration order.
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double lhs = candidates[i].score.comparison_value();
        const double rhs = candidates[best].score.comparison_value();
        if (lhs > rhs) {
            best = i;
            continue;
        }
        if (lhs < rhs) continue;
        if (nodes[i].ops != nodes[best].ops) {
            if (nodes[i].ops < nodes[best].ops) best = i;
            continue;
        }
        if (nodes[i].prompt.text_form(cfg.placeholder_sentinel) <
            nodes[best].prompt.text_form(cfg.placeholder_sentinel)) {
            best = i;
        }
    }

    OracleResult result;
    result.best_prompt = nodes[best].prompt;
    result.best_score = candidates[best].score.comparison_value();
    result.best_candidate = candidates[best];
    result.neighborhood_size = nodes.size();
    result.depth = depth;
    return result;
}

}  // namespace promptevo
