#include "mera/mobility.hpp"

#include <algorithm>
#include <map>

namespace mera {

double connection_probability(const CoverageSegment& segment, double speed, double slot_length) {
    if (!(speed > 0.0) || !(slot_length > 0.0)) return 0.0;
    double present = segment.coverage_length / speed - segment.registration_time - segment.wait_time;
    return std::clamp(present / slot_length, 0.0, 1.0);
}

double connection_probability(const MobilityTrace& trace, const std::string& ap, double slot_length) {
    double p = 0.0;
    for (const auto& seg : trace.segments)
        if (seg.ap == ap) p += connection_probability(seg, trace.speed, slot_length);
    return std::min(p, 1.0);
}

std::vector<ApShare> vehicle_coverage(const MobilityTrace& trace, const Topology& topology,
                                      double slot_length) {
    // A vehicle may pass the same AP twice in a slot; shares accumulate.
    std::map<ApIndex, double> by_ap;
    for (const auto& seg : trace.segments) {
        auto m = topology.find_ap(seg.ap);
        if (!m) continue;
        by_ap[*m] += connection_probability(seg, trace.speed, slot_length);
    }
    std::vector<ApShare> out;
    double total = 0.0;
    for (auto& [m, p] : by_ap) {
        p = std::min(p, 1.0);
        if (p > 0.0) {
            out.push_back({m, p});
            total += p;
        }
    }
    if (total > 1.0)
        for (auto& s : out) s.probability /= total;
    return out;
}

ApIndex dominant_ap(const std::vector<ApShare>& coverage, ApIndex fallback) {
    ApIndex best = fallback;
    double best_p = 0.0;
    for (const auto& s : coverage) {
        if (s.probability > best_p || (s.probability == best_p && best_p > 0.0 && s.ap < best)) {
            best = s.ap;
            best_p = s.probability;
        }
    }
    return best;
}

} // namespace mera
