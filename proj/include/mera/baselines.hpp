#pragma once

#include "mera/cost.hpp"
#include "mera/plan.hpp"

namespace mera {

// Fog node that first receives a service's requests: the active fog
// colocated with the dominant AP, otherwise the nearest active fog from
// that AP (hops, then delay, then id). no_index if no fog is reachable.
NodeIndex receiving_fog(const ValidatedScenario& scenario, const RoundState& state, ServiceIndex i);

// Cloud host used for spill-over (first reachable active cloud).
NodeIndex spill_cloud(const CostModel& model, ServiceIndex i);

// Local-first: the receiver if the service still fits there, else the cloud.
Assignment baseline_place(const CostModel& model);

// Cost-sorted First Fit: each service (id order) goes to the feasible host
// with the lowest cost for that service given what is already placed.
Assignment greedy_place(const CostModel& model);

} // namespace mera
