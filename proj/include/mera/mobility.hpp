#pragma once

#include <vector>

#include "mera/model.hpp"

namespace mera {

// Coverage-time share of a trace segment within one slot, clamped to [0,1].
double connection_probability(const CoverageSegment& segment, double speed, double slot_length);

// Probability for `ap`; zero when the trace never visits it.
double connection_probability(const MobilityTrace& trace, const std::string& ap, double slot_length);

inline double connectivity_time(double probability, double slot_length) {
    return probability * slot_length;
}

/// Per-AP connection probabilities of one vehicle, normalised so they sum
/// to at most one. Entries are sorted by AP index and zero entries dropped.
std::vector<ApShare> vehicle_coverage(const MobilityTrace& trace, const Topology& topology,
                                      double slot_length);

// AP with the largest share (lowest index on ties), or `fallback` when the
// coverage is empty.
ApIndex dominant_ap(const std::vector<ApShare>& coverage, ApIndex fallback);

} // namespace mera
