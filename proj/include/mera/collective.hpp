#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mera/objectives.hpp"
#include "mera/plan.hpp"

namespace mera {

/// Balanced tree over agents in heap layout: position p has children
/// b*p+1 .. b*p+b. `agent_at[p]` is the input index of the agent there.
struct TreeOverlay {
    std::size_t branching = 2;
    std::vector<std::size_t> agent_at;
    std::vector<std::size_t> parent;  // by position; root's parent is no_index
    std::vector<std::vector<std::size_t>> children; // by position
    std::vector<int> level;           // by position, root = 0
    int height = 0;

    std::size_t size() const { return agent_at.size(); }
};

// Agents are ordered by id, then shuffled with the seed.
TreeOverlay build_tree(const std::vector<std::string>& agent_ids, std::size_t branching, std::uint64_t seed);

struct IterationRecord {
    int iteration = 0;
    UtilizationVector global_plan;
    double combined_cost = 0.0;
    double local_cost = 0.0;   // mean selected local cost
    double global_cost = 0.0;  // sigma(g)
    std::vector<std::size_t> selections; // by agent
    std::uint64_t evaluations = 0;       // plan evaluations in this iteration
};

struct OptimizerOptions {
    double lambda = 0.5;
    int max_iterations = 40;
    bool stop_on_convergence = true;
};

struct OptimizationResult {
    std::vector<std::size_t> selections; // by agent
    std::vector<IterationRecord> iterations;
    Normalizer normalizer;
    bool converged = false;
};

// Per-agent plan summaries consumed by the optimizer.
struct AgentPlans {
    std::vector<UtilizationVector> utilization;
    std::vector<double> cost;

    std::size_t size() const { return cost.size(); }
};

AgentPlans summarize(const std::vector<PlacementPlan>& plans);

// Min-max ranges: mean local cost between all-cheapest and all-dearest
// selections; global cost over the "every agent picks index k" selections.
Normalizer fit_normalizer(const std::vector<AgentPlans>& agents, const GlobalObjective& objective);

/// Iterative tree-based plan selection. Every iteration runs a bottom-up
/// pass in which each agent picks its plan (and which of its children's
/// proposals to accept) against the previous global plan, followed by a
/// top-down commit from the root. The root only accepts a change that does
/// not raise the combined cost.
OptimizationResult optimize(const std::vector<AgentPlans>& agents, const TreeOverlay& tree,
                            const GlobalObjective& objective, const OptimizerOptions& options);

struct ComplexityProbe {
    std::size_t agents = 0;
    int depth = 0;
    std::vector<std::uint64_t> evaluations_per_iteration;
    std::uint64_t total_evaluations = 0;
};

// Runs the optimizer on seeded synthetic agents for exactly `iterations`
// iterations and reports the instrumentation counters.
ComplexityProbe complexity_probe(std::size_t agent_count, std::size_t plans_per_agent, int iterations,
                                 std::uint64_t seed, std::size_t branching = 2);

} // namespace mera
