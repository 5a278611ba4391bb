#pragma once

#include <vector>

#include "mera/model.hpp"
#include "mera/validate.hpp"

namespace mera {

struct CostBreakdown {
    double processing = 0.0;
    double ram = 0.0;
    double storage = 0.0;
    double deployment = 0.0;
    double communication = 0.0;
    double energy = 0.0;
    double carbon = 0.0;
    double violation = 0.0;
    double total = 0.0;
    double server_power_cost = 0.0;  // $/s
    double network_power_cost = 0.0; // $/s
    double nonrenewable_power = 0.0; // W

    void add(const CostBreakdown& o);
    void finalize_total();
};

// Service -> host assignment over indices of RoundState::services / nodes.
struct Assignment {
    std::vector<ServiceIndex> services;
    std::vector<NodeIndex> hosts;

    std::size_t size() const { return services.size(); }
    void push(ServiceIndex i, NodeIndex j) {
        services.push_back(i);
        hosts.push_back(j);
    }
};

/// Cost evaluator for one decision round. Everything that does not depend on
/// which other services share a host is precomputed per (service, host)
/// pair; the waiting-time driven violation term is evaluated on demand from
/// the host's summed per-request CPU demand.
class CostModel {
public:
    CostModel(const ValidatedScenario& scenario, const RoundState& state);

    const RoundState& state() const { return *state_; }
    const ValidatedScenario& scenario() const { return *scenario_; }

    // Host usable by a service: active and reachable from every covering AP.
    bool reachable(ServiceIndex i, NodeIndex j) const { return pair(i, j).reachable; }

    // Host-independent-of-co-location components of service i on host j.
    const CostBreakdown& fixed_terms(ServiceIndex i, NodeIndex j) const { return pair(i, j).fixed; }

    // Waiting time of service i on host j when the host's services sum to
    // `host_cpu_demand` MI per request (including i). Infinite if unstable.
    double waiting(ServiceIndex i, NodeIndex j, double host_cpu_demand) const;
    double violation_fraction(ServiceIndex i, NodeIndex j, double host_cpu_demand) const;
    double violation_cost(ServiceIndex i, NodeIndex j, double host_cpu_demand) const;

    // Lowest achievable per-AP delay check: could service i ever meet its
    // deadline on j (alone, no container start)?
    bool deadline_feasible_unloaded(ServiceIndex i, NodeIndex j) const;

    // Full cost of service i on j with the given co-location demand.
    CostBreakdown service_cost(ServiceIndex i, NodeIndex j, double host_cpu_demand) const;
    double service_total(ServiceIndex i, NodeIndex j, double host_cpu_demand) const;

    // Cost of an entire assignment; co-location is taken from the
    // assignment itself.
    CostBreakdown evaluate(const Assignment& a) const;

    // Per-node CPU and RAM utilisation shares, laid out [cpu_0, ram_0, cpu_1, ...].
    void add_utilization(ServiceIndex i, NodeIndex j, std::vector<double>& g) const;
    std::vector<double> utilization(const Assignment& a) const;

private:
    struct AccessTerm {
        double probability;
        double delay;
    };
    struct PairTerms {
        bool reachable = false;
        CostBreakdown fixed;
        std::vector<AccessTerm> access;
        double startup = 0.0;
    };

    const PairTerms& pair(ServiceIndex i, NodeIndex j) const { return pairs_[i * nodes_ + j]; }
    void build_pair(ServiceIndex i, NodeIndex j, PairTerms& out) const;

    const ValidatedScenario* scenario_;
    const RoundState* state_;
    std::size_t nodes_;
    std::vector<PairTerms> pairs_;
};

// Component views over an assignment.
struct ResourceCost {
    double processing = 0.0;
    double ram = 0.0;
    double storage = 0.0;
};
struct PowerAndEnergy {
    double server_power_cost = 0.0;
    double network_power_cost = 0.0;
    double energy = 0.0;
    double nonrenewable_power = 0.0;
    double carbon = 0.0;
};

ResourceCost resource_cost(const Assignment& a, const CostModel& model);
double deployment_cost(const Assignment& a, const CostModel& model);
double communication_cost(const Assignment& a, const CostModel& model);
PowerAndEnergy power_and_energy(const Assignment& a, const CostModel& model);
double violation_cost(const Assignment& a, const CostModel& model);
CostBreakdown total_local_cost(const Assignment& a, const CostModel& model);

// Unit price of electricity, $/J, for a device with the given renewable share.
double energy_unit_price(const PriceBook& prices, double renewable_ratio);

} // namespace mera
