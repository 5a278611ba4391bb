#include "mera/collective.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mera/rng.hpp"

namespace mera {

TreeOverlay build_tree(const std::vector<std::string>& agent_ids, std::size_t branching, std::uint64_t seed) {
    if (agent_ids.empty()) throw std::invalid_argument("build_tree: no agents");
    if (branching < 1) throw std::invalid_argument("build_tree: branching must be positive");
    TreeOverlay t;
    t.branching = branching;
    t.agent_at.resize(agent_ids.size());
    std::iota(t.agent_at.begin(), t.agent_at.end(), 0);
    std::sort(t.agent_at.begin(), t.agent_at.end(),
              [&](std::size_t a, std::size_t b) { return agent_ids[a] < agent_ids[b]; });
    Rng rng(mix_seed({seed, 0x72ee0ULL}));
    rng.shuffle(t.agent_at);

    const std::size_t n = agent_ids.size();
    t.parent.assign(n, no_index);
    t.children.assign(n, {});
    t.level.assign(n, 0);
    for (std::size_t p = 1; p < n; ++p) {
        t.parent[p] = (p - 1) / branching;
        t.children[t.parent[p]].push_back(p);
        t.level[p] = t.level[t.parent[p]] + 1;
        t.height = std::max(t.height, t.level[p]);
    }
    return t;
}

AgentPlans summarize(const std::vector<PlacementPlan>& plans) {
    AgentPlans a;
    for (const auto& p : plans) {
        a.utilization.push_back(p.utilization);
        a.cost.push_back(p.local_cost());
    }
    return a;
}

Normalizer fit_normalizer(const std::vector<AgentPlans>& agents, const GlobalObjective& objective) {
    Normalizer n;
    const double count = static_cast<double>(agents.size());
    double lo = 0.0, hi = 0.0;
    std::size_t depth = 0;
    std::size_t dims = 0;
    for (const auto& a : agents) {
        lo += *std::min_element(a.cost.begin(), a.cost.end());
        hi += *std::max_element(a.cost.begin(), a.cost.end());
        depth = std::max(depth, a.size());
        if (!a.utilization.empty()) dims = a.utilization.front().size();
    }
    n.local_min = lo / count;
    n.local_max = hi / count;

    n.global_min = std::numeric_limits<double>::infinity();
    n.global_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < depth; ++k) {
        UtilizationVector g(dims, 0.0);
        for (const auto& a : agents) {
            const auto& u = a.utilization[std::min(k, a.size() - 1)];
            for (std::size_t d = 0; d < dims; ++d) g[d] += u[d];
        }
        double v = objective(g);
        n.global_min = std::min(n.global_min, v);
        n.global_max = std::max(n.global_max, v);
    }
    return n;
}

namespace {

void add_into(UtilizationVector& acc, const UtilizationVector& v) {
    for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += v[d];
}

} // namespace

OptimizationResult optimize(const std::vector<AgentPlans>& agents, const TreeOverlay& tree,
                            const GlobalObjective& objective, const OptimizerOptions& options) {
    const std::size_t n = agents.size();
    if (n == 0 || tree.size() != n) throw std::invalid_argument("optimize: tree does not match agents");
    for (const auto& a : agents)
        if (a.size() == 0) throw std::invalid_argument("optimize: every agent needs at least one plan");
    if (!(options.lambda >= 0.0 && options.lambda <= 1.0)) throw std::invalid_argument("optimize: lambda outside [0,1]");

    const std::size_t dims = agents.front().utilization.front().size();
    OptimizationResult result;
    result.normalizer = fit_normalizer(agents, objective);
    const Normalizer& norm = result.normalizer;
    const double lambda = options.lambda;
    auto score = [&](double local_sum, const UtilizationVector& g) {
        return combined_cost(lambda, norm.local(local_sum / static_cast<double>(n)), norm.global(objective(g)));
    };

    // State by tree position.
    std::vector<std::size_t> sel(n, 0);
    std::vector<UtilizationVector> subtree(n, UtilizationVector(dims, 0.0));
    std::vector<double> subtree_local(n, 0.0);

    // Tentative proposals of the current bottom-up pass.
    std::vector<std::size_t> proposal(n, 0);
    std::vector<unsigned> approved(n, 0);
    std::vector<UtilizationVector> proposed(n, UtilizationVector(dims, 0.0));
    std::vector<double> proposed_local(n, 0.0);

    UtilizationVector global(dims, 0.0);
    double global_local = 0.0;
    double current_cost = 0.0;
    UtilizationVector cand(dims), base(dims);

    auto rebuild = [&]() {
        for (std::size_t p = n; p-- > 0;) {
            const AgentPlans& ap = agents[tree.agent_at[p]];
            std::fill(subtree[p].begin(), subtree[p].end(), 0.0);
            double local = 0.0;
            for (std::size_t c : tree.children[p]) {
                add_into(subtree[p], subtree[c]);
                local += subtree_local[c];
            }
            add_into(subtree[p], ap.utilization[sel[p]]);
            subtree_local[p] = local + ap.cost[sel[p]];
        }
        global = subtree[0];
        global_local = subtree_local[0];
    };

    auto record = [&](int t, std::uint64_t evals) {
        IterationRecord r;
        r.iteration = t;
        r.global_plan = global;
        r.combined_cost = current_cost;
        r.local_cost = global_local / static_cast<double>(n);
        r.global_cost = objective(global);
        r.selections.assign(n, 0);
        for (std::size_t p = 0; p < n; ++p) r.selections[tree.agent_at[p]] = sel[p];
        r.evaluations = evals;
        result.iterations.push_back(std::move(r));
    };

    // Iteration 0: greedy bottom-up on partial aggregates.
    {
        std::uint64_t evals = 0;
        for (std::size_t p = n; p-- > 0;) {
            const AgentPlans& ap = agents[tree.agent_at[p]];
            std::fill(base.begin(), base.end(), 0.0);
            double base_local = 0.0;
            for (std::size_t c : tree.children[p]) {
                add_into(base, subtree[c]);
                base_local += subtree_local[c];
            }
            std::size_t best = 0;
            double best_cost = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < ap.size(); ++k) {
                cand = base;
                add_into(cand, ap.utilization[k]);
                double c = score(base_local + ap.cost[k], cand);
                ++evals;
                if (c < best_cost) {
                    best_cost = c;
                    best = k;
                }
            }
            sel[p] = best;
            subtree[p] = base;
            add_into(subtree[p], ap.utilization[best]);
            subtree_local[p] = base_local + ap.cost[best];
            if (p == 0) current_cost = best_cost;
        }
        global = subtree[0];
        global_local = subtree_local[0];
        record(0, evals);
    }

    for (int t = 1; t < options.max_iterations; ++t) {
        std::uint64_t evals = 0;
        for (std::size_t p = n; p-- > 0;) {
            const AgentPlans& ap = agents[tree.agent_at[p]];
            const auto& kids = tree.children[p];
            // Everything outside this subtree, as of the previous iteration.
            UtilizationVector others(dims);
            for (std::size_t d = 0; d < dims; ++d) others[d] = global[d] - subtree[p][d];
            const double others_local = global_local - subtree_local[p];

            const unsigned masks = 1u << kids.size();
            std::size_t best_k = sel[p];
            unsigned best_mask = 0;
            double best_cost = std::numeric_limits<double>::infinity();
            UtilizationVector best_base;
            double best_base_local = 0.0;
            for (unsigned mask = 0; mask < masks; ++mask) {
                base = others;
                double local = others_local;
                for (std::size_t q = 0; q < kids.size(); ++q) {
                    bool take = mask & (1u << q);
                    add_into(base, take ? proposed[kids[q]] : subtree[kids[q]]);
                    local += take ? proposed_local[kids[q]] : subtree_local[kids[q]];
                }
                // Unchanged own plan first so ties keep the previous choice.
                auto try_plan = [&](std::size_t k) {
                    cand = base;
                    add_into(cand, ap.utilization[k]);
                    double c = score(local + ap.cost[k], cand);
                    ++evals;
                    if (c < best_cost) {
                        best_cost = c;
                        best_k = k;
                        best_mask = mask;
                        best_base = base;
                        best_base_local = local;
                    }
                };
                try_plan(sel[p]);
                for (std::size_t k = 0; k < ap.size(); ++k)
                    if (k != sel[p]) try_plan(k);
            }
            proposal[p] = best_k;
            approved[p] = best_mask;
            // Subtree aggregate = chosen base minus the outside part.
            proposed[p] = best_base;
            for (std::size_t d = 0; d < dims; ++d) proposed[p][d] -= others[d];
            add_into(proposed[p], ap.utilization[best_k]);
            proposed_local[p] = best_base_local - others_local + ap.cost[best_k];

            if (p == 0 && !(best_cost <= current_cost)) {
                proposal[0] = sel[0];
                approved[0] = 0;
            }
        }

        // Top-down commit of accepted proposals, then an exact rebuild of
        // the aggregates. A change is kept only if the rebuilt global plan
        // does not raise the combined cost.
        const std::vector<std::size_t> saved_sel = sel;
        bool changed = false;
        std::vector<std::size_t> stack{0};
        while (!stack.empty()) {
            std::size_t p = stack.back();
            stack.pop_back();
            changed = changed || proposal[p] != sel[p];
            sel[p] = proposal[p];
            const auto& kids = tree.children[p];
            for (std::size_t q = 0; q < kids.size(); ++q)
                if (approved[p] & (1u << q)) stack.push_back(kids[q]);
        }
        if (changed) {
            auto saved_subtree = subtree;
            auto saved_local = subtree_local;
            rebuild();
            double exact = score(global_local, global);
            if (exact <= current_cost) {
                current_cost = exact;
            } else {
                sel = saved_sel;
                subtree = std::move(saved_subtree);
                subtree_local = std::move(saved_local);
                global = subtree[0];
                global_local = subtree_local[0];
                changed = false;
            }
        }
        record(t, evals);
        if (!changed && options.stop_on_convergence) {
            result.converged = true;
            break;
        }
    }

    result.selections.assign(n, 0);
    for (std::size_t p = 0; p < n; ++p) result.selections[tree.agent_at[p]] = sel[p];
    return result;
}

ComplexityProbe complexity_probe(std::size_t agent_count, std::size_t plans_per_agent, int iterations,
                                 std::uint64_t seed, std::size_t branching) {
    Rng rng(mix_seed({seed, agent_count, plans_per_agent}));
    const std::size_t hosts = agent_count;
    std::vector<AgentPlans> agents(agent_count);
    std::vector<std::string> ids;
    for (std::size_t a = 0; a < agent_count; ++a) {
        ids.push_back("agent-" + std::to_string(a));
        for (std::size_t k = 0; k < plans_per_agent; ++k) {
            UtilizationVector u(2 * hosts, 0.0);
            u[2 * rng.index(hosts)] += rng.uniform(0.0, 0.2);
            u[2 * rng.index(hosts) + 1] += rng.uniform(0.0, 0.2);
            agents[a].utilization.push_back(std::move(u));
            agents[a].cost.push_back(rng.uniform(1.0, 2.0));
        }
    }
    TreeOverlay tree = build_tree(ids, branching, seed);
    GlobalObjective objective;
    OptimizerOptions opt;
    opt.lambda = 0.5;
    opt.max_iterations = iterations;
    opt.stop_on_convergence = false;
    auto res = optimize(agents, tree, objective, opt);

    ComplexityProbe probe;
    probe.agents = agent_count;
    probe.depth = tree.height;
    for (const auto& r : res.iterations) {
        probe.evaluations_per_iteration.push_back(r.evaluations);
        probe.total_evaluations += r.evaluations;
    }
    return probe;
}

} // namespace mera
