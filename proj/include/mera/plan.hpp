#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mera/cost.hpp"
#include "mera/objectives.hpp"

namespace mera {

class InfeasibleScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PlacementPlan {
    std::string owner;
    Assignment assignment;
    UtilizationVector utilization;
    CostBreakdown cost;

    double local_cost() const { return cost.total; }
};

enum class ViolationKind { storage, ram, cpu, stability, duplicate, inactive_host, unknown_index };

struct FeasibilityViolation {
    ViolationKind kind;
    ServiceIndex service = no_index;
    NodeIndex node = no_index;
    std::string message;
};

const char* to_string(ViolationKind kind);

/// Running per-host load used for incremental feasibility.
struct HostLoad {
    double cpu_load = 0.0;    // sum of rate * demand, MI/s
    double cpu_demand = 0.0;  // sum of demand, MI per request
    double ram = 0.0;
    double storage = 0.0;
    double max_rate = 0.0;    // largest arrival rate among hosted services

    void add(const Service& s);
};

// Would `node` still satisfy capacity and stability with `s` added?
bool fits(const Node& node, const HostLoad& load, const Service& s, double utilization_cap);

// Capacity (RAM, storage, CPU share up to the cap), queue stability, host
// activity and single-host constraints. Unbounded hosts only need to be
// active. Returns every violation found.
std::vector<FeasibilityViolation> feasibility_check(const Assignment& a, const std::vector<Node>& nodes,
                                                    const std::vector<Service>& services,
                                                    double utilization_cap);

struct PlanOptions {
    std::size_t count = 20;       // |delta|
    std::size_t top_k = 0;        // diversification depth K; 0 means `count`
    int hop_radius = -1;          // fog candidates within this many hops of the receiving AP; <0 = all
    std::size_t exhaustive_limit = 4096;
    std::uint64_t seed = 0;
};

// Candidate hosts of one service: reachable active fogs that could meet the
// deadline at least when unloaded, plus every reachable cloud.
std::vector<NodeIndex> candidate_hosts(const CostModel& model, ServiceIndex i, int hop_radius = -1);

/// Up to `count` distinct feasible plans for the services an agent received,
/// sorted by ascending local cost. Throws InfeasibleScenarioError if some
/// service has no feasible host at all.
std::vector<PlacementPlan> generate_plans(const std::string& agent, const std::vector<ServiceIndex>& received,
                                          const CostModel& model, const PlanOptions& options);

// Cheapest feasible assignment by full enumeration (test-scale only).
PlacementPlan exhaustive_minimum(const std::string& agent, const std::vector<ServiceIndex>& received,
                                 const CostModel& model, int hop_radius = -1);

PlacementPlan make_plan(const std::string& agent, Assignment a, const CostModel& model);

} // namespace mera
