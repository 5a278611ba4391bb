#include "mera/baselines.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace mera {

NodeIndex receiving_fog(const ValidatedScenario& scenario, const RoundState& state, ServiceIndex i) {
    const Topology& topo = scenario.scenario.topology;
    const ApIndex m = state.dominant_ap[i];
    if (m == no_index || m >= topo.access_points.size()) return no_index;
    const AccessPoint& ap = topo.access_points[m];
    if (!ap.colocated_fog.empty()) {
        if (auto j = topo.find_node(ap.colocated_fog); j && state.nodes[*j].active) return *j;
    }
    NodeIndex best = no_index;
    std::tuple<int, double, std::string> best_key;
    for (NodeIndex j = 0; j < state.nodes.size(); ++j) {
        const Node& n = state.nodes[j];
        if (n.is_cloud() || !n.active) continue;
        const Route& r = scenario.network.ap_to_host(m, j);
        if (!r.reachable) continue;
        auto key = std::make_tuple(r.hops, r.delay, n.id);
        if (best == no_index || key < best_key) {
            best = j;
            best_key = key;
        }
    }
    return best;
}

NodeIndex spill_cloud(const CostModel& model, ServiceIndex i) {
    const auto& nodes = model.state().nodes;
    for (NodeIndex j = 0; j < nodes.size(); ++j)
        if (nodes[j].is_cloud() && model.reachable(i, j)) return j;
    throw InfeasibleScenarioError("no reachable cloud for service '" + model.state().services[i].id + "'");
}

Assignment baseline_place(const CostModel& model) {
    const RoundState& st = model.state();
    std::vector<HostLoad> load(st.nodes.size());
    Assignment a;
    for (ServiceIndex i = 0; i < st.services.size(); ++i) {
        const Service& s = st.services[i];
        NodeIndex r = receiving_fog(model.scenario(), st, i);
        NodeIndex host = no_index;
        if (r != no_index && model.reachable(i, r) && fits(st.nodes[r], load[r], s, st.utilization_cap)) host = r;
        if (host == no_index) host = spill_cloud(model, i);
        load[host].add(s);
        a.push(i, host);
    }
    return a;
}

Assignment greedy_place(const CostModel& model) {
    const RoundState& st = model.state();
    std::vector<HostLoad> load(st.nodes.size());
    Assignment a;
    std::vector<std::tuple<double, std::string, NodeIndex>> ranked;
    for (ServiceIndex i = 0; i < st.services.size(); ++i) {
        const Service& s = st.services[i];
        ranked.clear();
        for (NodeIndex j = 0; j < st.nodes.size(); ++j) {
            if (!model.reachable(i, j)) continue;
            if (!fits(st.nodes[j], load[j], s, st.utilization_cap)) continue;
            // Execution cost of this request on j at j's current load; the
            // extra waiting it causes co-hosted services is not charged.
            const double c = model.service_total(i, j, load[j].cpu_demand + s.cpu_demand);
            ranked.emplace_back(c, st.nodes[j].id, j);
        }
        if (ranked.empty())
            throw InfeasibleScenarioError("greedy: no feasible host for service '" + s.id + "'");
        std::sort(ranked.begin(), ranked.end());
        NodeIndex host = std::get<2>(ranked.front());
        load[host].add(s);
        a.push(i, host);
    }
    return a;
}

} // namespace mera
