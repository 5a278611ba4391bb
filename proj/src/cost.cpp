#include "mera/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mera/mobility.hpp"
#include "mera/queueing.hpp"
#include "mera/units.hpp"

namespace mera {

void CostBreakdown::add(const CostBreakdown& o) {
    processing += o.processing;
    ram += o.ram;
    storage += o.storage;
    deployment += o.deployment;
    communication += o.communication;
    energy += o.energy;
    carbon += o.carbon;
    violation += o.violation;
    total += o.total;
    server_power_cost += o.server_power_cost;
    network_power_cost += o.network_power_cost;
    nonrenewable_power += o.nonrenewable_power;
}

void CostBreakdown::finalize_total() {
    total = processing + ram + storage + deployment + communication + energy + carbon + violation;
}

double energy_unit_price(const PriceBook& prices, double renewable_ratio) {
    double per_kwh = (1.0 - renewable_ratio) * prices.nonrenewable_energy +
                     renewable_ratio * prices.renewable_energy;
    return units::per_kwh_to_per_joule(per_kwh);
}

CostModel::CostModel(const ValidatedScenario& scenario, const RoundState& state)
    : scenario_(&scenario), state_(&state), nodes_(state.nodes.size()) {
    pairs_.resize(state.services.size() * nodes_);
    for (ServiceIndex i = 0; i < state.services.size(); ++i)
        for (NodeIndex j = 0; j < nodes_; ++j) build_pair(i, j, pairs_[i * nodes_ + j]);
}

void CostModel::build_pair(ServiceIndex i, NodeIndex j, PairTerms& out) const {
    const Scenario& sc = scenario_->scenario;
    const Topology& topo = sc.topology;
    const PriceBook& prices = sc.prices;
    const Network& net = scenario_->network;
    const Service& sv = state_->services[i];
    const Node& node = state_->nodes[j];
    const auto& coverage = state_->coverage[i];
    const double tau = state_->slot_length;
    const double z = sv.arrival_rate;
    const double bytes = sv.request_size + sv.response_size;

    out.reachable = node.active;
    if (!node.active) return;
    // Vehicles outside every coverage area can only be served by the cloud.
    if (coverage.empty() && !node.is_cloud()) {
        out.reachable = false;
        return;
    }

    CostBreakdown& c = out.fixed;
    for (const auto& share : coverage) {
        const Route& r = net.ap_to_host(share.ap, j);
        if (!r.reachable) {
            out.reachable = false;
            return;
        }
        out.access.push_back({share.probability, access_delay(sv, topo.access_points[share.ap], r)});
        c.communication += bytes * z * r.unit_cost * connectivity_time(share.probability, tau);
    }

    const NodePrices& np = prices.node[j];
    c.processing = z * sv.cpu_demand * np.cpu * tau;
    c.ram = sv.ram_demand * np.ram * tau;
    c.storage = sv.storage_demand * np.storage * tau;

    auto previous = state_->previous_placement.find(sv.id);
    const bool fresh = previous == state_->previous_placement.end() || previous->second != j;
    if (fresh && !node.is_cloud()) c.deployment = sv.storage_demand * net.host_to_cloud(j).unit_cost;
    if (fresh && state_->apply_startup_delay) out.startup = state_->startup_delay;

    // Dynamic server power: incremental watts per unit of load.
    const double pue = node.is_cloud() ? node.pue : 1.0;
    const double share = z * sv.cpu_demand / node.cpu_capacity;
    const double server_watts = pue * (node.max_power - node.idle_power) * share;
    c.server_power_cost = server_watts * energy_unit_price(prices, node.renewable_ratio);
    c.nonrenewable_power = server_watts * (1.0 - node.renewable_ratio);

    // Networking: the device attaching the host, then the AP legs.
    auto transfer_watts = [&](const TransferEnergy& e) {
        return z * (sv.request_size * e.upload + sv.response_size * e.download);
    };
    if (!node.attached_router.empty()) {
        if (auto r = topo.find_router(node.attached_router)) {
            double watts = pue * transfer_watts(topo.routers[*r].transfer_energy);
            c.network_power_cost += watts * energy_unit_price(prices, node.renewable_ratio);
            c.nonrenewable_power += watts * (1.0 - node.renewable_ratio);
        }
    }
    for (const auto& share_m : coverage) {
        const AccessPoint& ap = topo.access_points[share_m.ap];
        double watts = share_m.probability * transfer_watts(ap.transfer_energy);
        c.network_power_cost += watts * energy_unit_price(prices, ap.renewable_ratio);
        c.nonrenewable_power += watts * (1.0 - ap.renewable_ratio);
    }

    c.energy = tau * (c.server_power_cost + c.network_power_cost);
    c.carbon = prices.carbon * prices.emission_rate * c.nonrenewable_power * tau / units::joules_per_kwh;
    c.finalize_total();
}

double CostModel::waiting(ServiceIndex i, NodeIndex j, double host_cpu_demand) const {
    const Service& sv = state_->services[i];
    const Node& node = state_->nodes[j];
    auto q = assess_queue(sv, node, host_cpu_demand);
    return q.waiting_time;
}

double CostModel::violation_fraction(ServiceIndex i, NodeIndex j, double host_cpu_demand) const {
    const PairTerms& p = pair(i, j);
    const Service& sv = state_->services[i];
    const double w = waiting(i, j, host_cpu_demand);
    double v = 0.0;
    for (const auto& a : p.access)
        if (!(w + p.startup + a.delay < sv.deadline)) v += a.probability;
    return std::min(v, 1.0);
}

double CostModel::violation_cost(ServiceIndex i, NodeIndex j, double host_cpu_demand) const {
    const Service& sv = state_->services[i];
    double excess = violation_fraction(i, j, host_cpu_demand) - (1.0 - sv.qos_level);
    if (excess <= 0.0) return 0.0;
    return excess * sv.arrival_rate * sv.violation_unit_cost * state_->slot_length;
}

bool CostModel::deadline_feasible_unloaded(ServiceIndex i, NodeIndex j) const {
    const PairTerms& p = pair(i, j);
    if (!p.reachable) return false;
    const Service& sv = state_->services[i];
    const double w = waiting(i, j, sv.cpu_demand);
    if (p.access.empty()) return std::isfinite(w) && w < sv.deadline;
    for (const auto& a : p.access)
        if (w + a.delay < sv.deadline) return true;
    return false;
}

CostBreakdown CostModel::service_cost(ServiceIndex i, NodeIndex j, double host_cpu_demand) const {
    CostBreakdown c = pair(i, j).fixed;
    c.violation = violation_cost(i, j, host_cpu_demand);
    c.finalize_total();
    return c;
}

double CostModel::service_total(ServiceIndex i, NodeIndex j, double host_cpu_demand) const {
    return pair(i, j).fixed.total + violation_cost(i, j, host_cpu_demand);
}

CostBreakdown CostModel::evaluate(const Assignment& a) const {
    std::vector<double> demand(nodes_, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k)
        demand[a.hosts[k]] += state_->services[a.services[k]].cpu_demand;
    CostBreakdown total;
    for (std::size_t k = 0; k < a.size(); ++k)
        total.add(service_cost(a.services[k], a.hosts[k], demand[a.hosts[k]]));
    total.finalize_total();
    return total;
}

void CostModel::add_utilization(ServiceIndex i, NodeIndex j, std::vector<double>& g) const {
    const Service& sv = state_->services[i];
    const Node& node = state_->nodes[j];
    g[2 * j] += sv.cpu_load() / node.cpu_capacity;
    g[2 * j + 1] += sv.ram_demand / node.ram_capacity;
}

std::vector<double> CostModel::utilization(const Assignment& a) const {
    std::vector<double> g(2 * nodes_, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) add_utilization(a.services[k], a.hosts[k], g);
    return g;
}

ResourceCost resource_cost(const Assignment& a, const CostModel& model) {
    ResourceCost r;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& f = model.fixed_terms(a.services[k], a.hosts[k]);
        r.processing += f.processing;
        r.ram += f.ram;
        r.storage += f.storage;
    }
    return r;
}

double deployment_cost(const Assignment& a, const CostModel& model) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d += model.fixed_terms(a.services[k], a.hosts[k]).deployment;
    return d;
}

double communication_cost(const Assignment& a, const CostModel& model) {
    double c = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!model.reachable(a.services[k], a.hosts[k]))
            throw UnreachableHostError("communication_cost: host unreachable for service '" +
                                       model.state().services[a.services[k]].id + "'");
        c += model.fixed_terms(a.services[k], a.hosts[k]).communication;
    }
    return c;
}

PowerAndEnergy power_and_energy(const Assignment& a, const CostModel& model) {
    PowerAndEnergy p;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& f = model.fixed_terms(a.services[k], a.hosts[k]);
        p.server_power_cost += f.server_power_cost;
        p.network_power_cost += f.network_power_cost;
        p.nonrenewable_power += f.nonrenewable_power;
        p.energy += f.energy;
        p.carbon += f.carbon;
    }
    return p;
}

double violation_cost(const Assignment& a, const CostModel& model) {
    return model.evaluate(a).violation;
}

CostBreakdown total_local_cost(const Assignment& a, const CostModel& model) {
    return model.evaluate(a);
}

} // namespace mera
