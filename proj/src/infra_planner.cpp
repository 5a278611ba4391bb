#include "mera/infra_planner.hpp"

#include <algorithm>
#include <stdexcept>

#include "mera/rng.hpp"

namespace mera {

DemandForecast current_demand(const std::vector<Service>& services) {
    DemandForecast d;
    for (const auto& s : services) {
        d.cpu += s.cpu_load();
        d.ram += s.ram_demand;
        d.storage += s.storage_demand;
    }
    return d;
}

CapacityPlan plan_capacity(const DemandForecast& demand, const std::vector<Node>& nodes, double ratio,
                           std::size_t active_count, std::uint64_t seed) {
    if (active_count == 0) throw std::invalid_argument("plan_capacity: active_count must be positive");
    if (!(ratio > 0.0)) throw std::invalid_argument("plan_capacity: ratio must be positive");
    std::vector<NodeIndex> fogs;
    for (NodeIndex j = 0; j < nodes.size(); ++j)
        if (!nodes[j].is_cloud()) fogs.push_back(j);
    if (active_count > fogs.size()) throw std::invalid_argument("plan_capacity: more active nodes than fog nodes");

    Rng rng(mix_seed({seed, active_count, 0x1fa5ULL}));
    rng.shuffle(fogs);
    fogs.resize(active_count);
    std::sort(fogs.begin(), fogs.end());

    CapacityPlan plan;
    plan.active = fogs;
    plan.nodes = nodes;
    for (auto& n : plan.nodes)
        if (!n.is_cloud()) n.active = false;

    double cpu = 0.0, ram = 0.0, storage = 0.0;
    for (NodeIndex j : fogs) {
        cpu += nodes[j].cpu_capacity;
        ram += nodes[j].ram_capacity;
        storage += nodes[j].storage_capacity;
    }
    const double cpu_scale = demand.cpu > 0.0 ? ratio * demand.cpu / cpu : 1.0;
    const double ram_scale = demand.ram > 0.0 ? ratio * demand.ram / ram : 1.0;
    const double storage_scale = demand.storage > 0.0 ? ratio * demand.storage / storage : 1.0;
    for (NodeIndex j : fogs) {
        Node& n = plan.nodes[j];
        n.active = true;
        n.unit_rate *= cpu_scale;
        n.cpu_capacity = n.unit_count * n.unit_rate;
        n.ram_capacity *= ram_scale;
        n.storage_capacity *= storage_scale;
    }
    return plan;
}

} // namespace mera
