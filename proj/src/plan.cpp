#include "mera/plan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mera/rng.hpp"

namespace mera {

const char* to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::storage: return "storage capacity";
    case ViolationKind::ram: return "ram capacity";
    case ViolationKind::cpu: return "cpu capacity";
    case ViolationKind::stability: return "queue stability";
    case ViolationKind::duplicate: return "multiple hosts";
    case ViolationKind::inactive_host: return "inactive host";
    case ViolationKind::unknown_index: return "unknown index";
    }
    return "unknown";
}

void HostLoad::add(const Service& s) {
    cpu_load += s.cpu_load();
    cpu_demand += s.cpu_demand;
    ram += s.ram_demand;
    storage += s.storage_demand;
    max_rate = std::max(max_rate, s.arrival_rate);
}

bool fits(const Node& node, const HostLoad& load, const Service& s, double cap) {
    if (!node.active) return false;
    if (node.unbounded) return true;
    if (!(load.storage + s.storage_demand < cap * node.storage_capacity)) return false;
    if (!(load.ram + s.ram_demand < cap * node.ram_capacity)) return false;
    if (!(load.cpu_load + s.cpu_load() < cap * node.cpu_capacity)) return false;
    // rate * summed host demand / capacity must stay below one for every co-hosted service.
    double rate = std::max(load.max_rate, s.arrival_rate);
    return rate * (load.cpu_demand + s.cpu_demand) < node.cpu_capacity;
}

std::vector<FeasibilityViolation> feasibility_check(const Assignment& a, const std::vector<Node>& nodes,
                                                    const std::vector<Service>& services, double cap) {
    std::vector<FeasibilityViolation> out;
    std::vector<HostLoad> load(nodes.size());
    std::vector<std::vector<ServiceIndex>> hosted(nodes.size());
    std::set<ServiceIndex> seen;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ServiceIndex i = a.services[k];
        NodeIndex j = a.hosts[k];
        if (i >= services.size() || j >= nodes.size()) {
            out.push_back({ViolationKind::unknown_index, i, j, "assignment references an unknown index"});
            continue;
        }
        if (!seen.insert(i).second)
            out.push_back({ViolationKind::duplicate, i, j, "service '" + services[i].id + "' assigned more than once"});
        if (!nodes[j].active)
            out.push_back({ViolationKind::inactive_host, i, j, "host '" + nodes[j].id + "' is not active"});
        load[j].add(services[i]);
        hosted[j].push_back(i);
    }
    for (NodeIndex j = 0; j < nodes.size(); ++j) {
        const Node& n = nodes[j];
        if (hosted[j].empty() || n.unbounded) continue;
        const HostLoad& l = load[j];
        if (!(l.storage < cap * n.storage_capacity))
            out.push_back({ViolationKind::storage, no_index, j, "storage demand exceeds capacity on '" + n.id + "'"});
        if (!(l.ram < cap * n.ram_capacity))
            out.push_back({ViolationKind::ram, no_index, j, "ram demand exceeds capacity on '" + n.id + "'"});
        if (!(l.cpu_load < cap * n.cpu_capacity))
            out.push_back({ViolationKind::cpu, no_index, j, "cpu load exceeds capacity on '" + n.id + "'"});
        for (ServiceIndex i : hosted[j]) {
            if (!(services[i].arrival_rate * l.cpu_demand < n.cpu_capacity))
                out.push_back({ViolationKind::stability, i, j,
                               "queue of '" + services[i].id + "' on '" + n.id + "' is unstable"});
        }
    }
    return out;
}

namespace {

double unloaded_total(const CostModel& model, ServiceIndex i, NodeIndex j) {
    return model.service_total(i, j, model.state().services[i].cpu_demand);
}

} // namespace

std::vector<NodeIndex> candidate_hosts(const CostModel& model, ServiceIndex i, int hop_radius) {
    const RoundState& st = model.state();
    const Network& net = model.scenario().network;
    double best_cloud = std::numeric_limits<double>::infinity();
    std::vector<NodeIndex> clouds;
    for (NodeIndex j = 0; j < st.nodes.size(); ++j) {
        if (!st.nodes[j].is_cloud() || !model.reachable(i, j)) continue;
        clouds.push_back(j);
        best_cloud = std::min(best_cloud, unloaded_total(model, i, j));
    }
    std::vector<NodeIndex> out;
    for (NodeIndex j = 0; j < st.nodes.size(); ++j) {
        const Node& n = st.nodes[j];
        if (!model.reachable(i, j)) continue;
        if (n.is_cloud()) {
            out.push_back(j);
            continue;
        }
        if (hop_radius >= 0 && st.dominant_ap[i] != no_index &&
            net.ap_to_host(st.dominant_ap[i], j).hops > hop_radius)
            continue;
        // A host that can never meet the deadline pays the full violation
        // whatever else it hosts; drop it when a cloud is no more expensive.
        if (!model.deadline_feasible_unloaded(i, j) && !clouds.empty() &&
            unloaded_total(model, i, j) >= best_cloud)
            continue;
        out.push_back(j);
    }
    return out;
}

PlacementPlan make_plan(const std::string& agent, Assignment a, const CostModel& model) {
    PlacementPlan p;
    p.owner = agent;
    p.cost = model.evaluate(a);
    p.utilization = model.utilization(a);
    p.assignment = std::move(a);
    return p;
}

namespace {

struct Search {
    const CostModel& model;
    const std::vector<ServiceIndex>& received;
    std::vector<std::vector<NodeIndex>> candidates;
    double cap;

    const Service& service(std::size_t k) const { return model.state().services[received[k]]; }
    const Node& node(NodeIndex j) const { return model.state().nodes[j]; }

    Assignment assignment_of(const std::vector<NodeIndex>& hosts) const {
        Assignment a;
        for (std::size_t k = 0; k < received.size(); ++k) a.push(received[k], hosts[k]);
        return a;
    }

    bool feasible(const std::vector<NodeIndex>& hosts) const {
        std::vector<HostLoad> load(model.state().nodes.size());
        for (std::size_t k = 0; k < hosts.size(); ++k) {
            if (!fits(node(hosts[k]), load[hosts[k]], service(k), cap)) return false;
            load[hosts[k]].add(service(k));
        }
        return true;
    }

    double cost(const std::vector<NodeIndex>& hosts) const { return model.evaluate(assignment_of(hosts)).total; }

    std::size_t space() const {
        std::size_t s = 1;
        for (const auto& c : candidates) {
            if (c.empty()) return 0;
            if (s > (std::size_t{1} << 40) / c.size()) return std::size_t{1} << 40;
            s *= c.size();
        }
        return s;
    }

    // Odometer over all candidate combinations; first minimum wins.
    std::optional<std::vector<NodeIndex>> exhaustive() const {
        const std::size_t n = received.size();
        std::vector<std::size_t> digit(n, 0);
        std::vector<NodeIndex> hosts(n);
        std::optional<std::vector<NodeIndex>> best;
        double best_cost = std::numeric_limits<double>::infinity();
        while (true) {
            for (std::size_t k = 0; k < n; ++k) hosts[k] = candidates[k][digit[k]];
            if (feasible(hosts)) {
                double c = cost(hosts);
                if (c < best_cost) {
                    best_cost = c;
                    best = hosts;
                }
            }
            std::size_t k = n;
            while (k > 0) {
                --k;
                if (++digit[k] < candidates[k].size()) break;
                digit[k] = 0;
                if (k == 0) return best;
            }
            if (n == 0) return best;
        }
    }

    // Sequential construction: each service picks, by roulette over inverse
    // cost, among the `top` cheapest hosts still feasible. top == 1 is the
    // deterministic greedy pass.
    std::optional<std::vector<NodeIndex>> construct(std::size_t top, Rng* rng) const {
        std::vector<HostLoad> load(model.state().nodes.size());
        std::vector<NodeIndex> hosts(received.size());
        std::vector<std::pair<double, NodeIndex>> scored;
        for (std::size_t k = 0; k < received.size(); ++k) {
            scored.clear();
            const Service& s = service(k);
            for (NodeIndex j : candidates[k]) {
                if (!fits(node(j), load[j], s, cap)) continue;
                scored.push_back({model.service_total(received[k], j, load[j].cpu_demand + s.cpu_demand), j});
            }
            if (scored.empty()) return std::nullopt;
            std::sort(scored.begin(), scored.end());
            std::size_t limit = std::min(top, scored.size());
            std::size_t pick = 0;
            if (limit > 1 && rng) {
                double total = 0.0;
                for (std::size_t q = 0; q < limit; ++q) total += 1.0 / std::max(scored[q].first, 1e-12);
                double r = rng->uniform(0.0, total);
                double acc = 0.0;
                pick = limit - 1;
                for (std::size_t q = 0; q < limit; ++q) {
                    acc += 1.0 / std::max(scored[q].first, 1e-12);
                    if (r < acc) {
                        pick = q;
                        break;
                    }
                }
            }
            hosts[k] = scored[pick].second;
            load[hosts[k]].add(s);
        }
        return hosts;
    }

    // First-improvement single-service moves until no move helps.
    void improve(std::vector<NodeIndex>& hosts) const {
        double current = cost(hosts);
        for (int pass = 0; pass < 4; ++pass) {
            bool changed = false;
            for (std::size_t k = 0; k < hosts.size(); ++k) {
                NodeIndex original = hosts[k];
                for (NodeIndex j : candidates[k]) {
                    if (j == hosts[k]) continue;
                    NodeIndex keep = hosts[k];
                    hosts[k] = j;
                    if (feasible(hosts)) {
                        double c = cost(hosts);
                        if (c < current - 1e-15 * std::abs(current)) {
                            current = c;
                            continue;
                        }
                    }
                    hosts[k] = keep;
                }
                changed = changed || hosts[k] != original;
            }
            if (!changed) break;
        }
    }
};

Search make_search(const CostModel& model, const std::vector<ServiceIndex>& received, int hop_radius) {
    Search s{model, received, {}, model.state().utilization_cap};
    for (ServiceIndex i : received) {
        s.candidates.push_back(candidate_hosts(model, i, hop_radius));
        if (s.candidates.back().empty())
            throw InfeasibleScenarioError("no reachable host for service '" + model.state().services[i].id + "'");
    }
    return s;
}

} // namespace

PlacementPlan exhaustive_minimum(const std::string& agent, const std::vector<ServiceIndex>& received,
                                 const CostModel& model, int hop_radius) {
    Search s = make_search(model, received, hop_radius);
    auto best = s.exhaustive();
    if (!best) throw InfeasibleScenarioError("no feasible assignment for agent '" + agent + "'");
    return make_plan(agent, s.assignment_of(*best), model);
}

std::vector<PlacementPlan> generate_plans(const std::string& agent, const std::vector<ServiceIndex>& received,
                                          const CostModel& model, const PlanOptions& options) {
    if (options.count == 0) throw std::invalid_argument("generate_plans: count must be at least 1");
    if (received.empty()) return {make_plan(agent, Assignment{}, model)};

    Search s = make_search(model, received, options.hop_radius);
    std::vector<std::vector<NodeIndex>> found;
    std::set<std::vector<NodeIndex>> distinct;
    auto keep = [&](std::vector<NodeIndex> hosts) {
        if (distinct.insert(hosts).second) found.push_back(std::move(hosts));
    };

    std::optional<std::vector<NodeIndex>> first;
    if (s.space() <= options.exhaustive_limit) {
        first = s.exhaustive();
    } else {
        first = s.construct(1, nullptr);
        if (first) s.improve(*first);
    }
    if (!first) {
        // Greedy can paint itself into a corner; any randomized pass that
        // succeeds is still a valid starting point.
        for (std::size_t k = 1; k <= 3 * options.count && !first; ++k) {
            Rng rng(mix_seed({options.seed, hash_id(agent), k, 0x5eedULL}));
            first = s.construct(s.candidates.size() ? 1 + k : 1, &rng);
        }
    }
    if (!first) throw InfeasibleScenarioError("no feasible plan for agent '" + agent + "'");
    keep(*first);

    const std::size_t depth = options.top_k ? options.top_k : options.count;
    const std::size_t attempts = 3 * options.count;
    for (std::size_t k = 1; k < attempts && found.size() < options.count; ++k) {
        Rng rng(mix_seed({options.seed, hash_id(agent), k}));
        auto hosts = s.construct(k % depth + 1, &rng);
        if (hosts) keep(std::move(*hosts));
    }

    std::vector<PlacementPlan> plans;
    plans.reserve(found.size());
    for (auto& hosts : found) plans.push_back(make_plan(agent, s.assignment_of(hosts), model));
    std::stable_sort(plans.begin(), plans.end(),
                     [](const PlacementPlan& a, const PlacementPlan& b) { return a.local_cost() < b.local_cost(); });
    return plans;
}

} // namespace mera
