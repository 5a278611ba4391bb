#pragma once

#include <cstdint>
#include <vector>

#include "mera/model.hpp"

namespace mera {

// Aggregate demand the planner provisions against.
struct DemandForecast {
    double cpu = 0.0;     // MI/s
    double ram = 0.0;     // bytes
    double storage = 0.0; // bytes
};

DemandForecast current_demand(const std::vector<Service>& services);

struct CapacityPlan {
    std::vector<NodeIndex> active;  // fog nodes kept on, ascending
    std::vector<Node> nodes;        // reference configuration for placement
};

// Sample `active_count` fog nodes (seeded, uniform), switch the others off
// and scale the sampled nodes' CPU (per-unit rate, unit count kept), RAM and
// storage so each aggregate equals `ratio` times the forecast demand. Cloud
// nodes are left untouched.
CapacityPlan plan_capacity(const DemandForecast& demand, const std::vector<Node>& nodes, double ratio,
                           std::size_t active_count, std::uint64_t seed);

} // namespace mera
