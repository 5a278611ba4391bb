#pragma once

// Hand-built scenarios shared by the unit tests.

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mera/mobility.hpp"
#include "mera/model.hpp"
#include "mera/simulation.hpp"
#include "mera/units.hpp"
#include "mera/validate.hpp"

namespace fixture {

using namespace mera;

inline Node fog(const std::string& id, int units, double unit_rate, double ram_gib, const std::string& router,
                double renewable, double idle_w = 100.0, double max_w = 300.0) {
    Node n;
    n.id = id;
    n.kind = NodeKind::fog;
    n.unit_count = units;
    n.unit_rate = unit_rate;
    n.cpu_capacity = units * unit_rate;
    n.ram_capacity = ram_gib * units::gib;
    n.storage_capacity = 100.0 * units::gib;
    n.idle_power = idle_w;
    n.max_power = max_w;
    n.renewable_ratio = renewable;
    n.attached_router = router;
    return n;
}

inline Link link(const std::string& a, const std::string& b, double delay_ms, double cost_per_gib,
                 LinkTier tier = LinkTier::intra_edge) {
    Link l;
    l.a = a;
    l.b = b;
    l.delay = delay_ms * units::millisecond;
    l.uplink_rate = 1.0 * units::gbps;
    l.downlink_rate = 10.0 * units::gbps;
    l.unit_cost = cost_per_gib / units::gib;
    l.tier = tier;
    return l;
}

inline Service service(const std::string& id, const std::string& vehicle) {
    Service s;
    s.id = id;
    s.vehicle = vehicle;
    s.cpu_demand = 100.0;
    s.ram_demand = 256.0 * units::mib;
    s.storage_demand = 100.0 * units::mib;
    s.request_size = 10.0 * units::kib;
    s.response_size = 10.0 * units::kib;
    s.deadline = 0.050;
    s.qos_level = 0.95;
    s.monthly_price = 10.0;
    return s;
}

inline MobilityTrace trace(const std::string& vehicle, std::vector<CoverageSegment> segments, double speed = 20.0) {
    return MobilityTrace{vehicle, speed, std::move(segments)};
}

// Two edge fogs, each behind its own AP and edge router, and one cloud
// behind a switch hanging off er-0:
//
//   ap-0 - er-0 - fog-0        ap-1 - er-1 - fog-1
//           |  \____________________/
//          sw-c - cloud-0
inline Scenario small_scenario() {
    Scenario s;
    s.name = "small";
    s.seed = 7;
    Topology& t = s.topology;

    t.nodes.push_back(fog("fog-0", 2, 20000.0, 4.0, "er-0", 0.0));
    t.nodes.push_back(fog("fog-1", 4, 10000.0, 8.0, "er-1", 0.5, 50.0, 150.0));
    Node c;
    c.id = "cloud-0";
    c.kind = NodeKind::cloud;
    c.unit_count = 10;
    c.unit_rate = 50000.0;
    c.cpu_capacity = 500000.0;
    c.ram_capacity = 1024.0 * units::gib;
    c.storage_capacity = 1024.0 * units::gib;
    c.idle_power = 0.0;
    c.max_power = 1000.0;
    c.renewable_ratio = 0.8;
    c.pue = 1.2;
    c.unbounded = true;
    c.attached_router = "sw-c";
    t.nodes.push_back(c);

    for (int k = 0; k < 2; ++k) {
        AccessPoint ap;
        ap.id = "ap-" + std::to_string(k);
        ap.x = 1000.0 * k;
        ap.coverage_radius = 500.0;
        ap.renewable_ratio = 0.0;
        ap.transfer_energy = {1e-8, 2e-8};
        ap.uplink_rate = 12.0 * units::mbps;
        ap.downlink_rate = 72.0 * units::mbps;
        ap.radio_delay = 1.0 * units::millisecond;
        ap.colocated_fog = "fog-" + std::to_string(k);
        t.access_points.push_back(ap);
    }
    t.routers.push_back({"er-0", RouterKind::edge_router, {1e-9, 1e-9}});
    t.routers.push_back({"er-1", RouterKind::edge_router, {1e-9, 1e-9}});
    t.routers.push_back({"sw-c", RouterKind::ethernet_switch, {5e-10, 5e-10}});

    t.links.push_back(link("ap-0", "er-0", 0.5, 0.01));
    t.links.push_back(link("er-0", "fog-0", 0.5, 0.01));
    t.links.push_back(link("ap-1", "er-1", 0.5, 0.01));
    t.links.push_back(link("er-1", "fog-1", 0.5, 0.01));
    t.links.push_back(link("er-0", "er-1", 1.0, 0.04, LinkTier::core));
    t.links.push_back(link("er-0", "sw-c", 20.0, 0.07, LinkTier::cloud));
    t.links.push_back(link("sw-c", "cloud-0", 0.0, 0.0, LinkTier::cloud));

    t.vehicles = {"v-0", "v-1", "v-2"};

    s.prices.node = {{6e-7, 1e-15, 1e-16}, {4e-7, 1e-15, 1e-16}, {2e-7, 1e-15, 1e-16}};
    s.prices.nonrenewable_energy = 0.20;
    s.prices.renewable_energy = 0.10;
    s.prices.carbon = 0.05;
    s.prices.emission_rate = 0.4;

    s.services = {service("s-0", "v-0"), service("s-1", "v-1"), service("s-2", "v-2")};
    s.traces = {{
        trace("v-0", {{"ap-0", 3000.0, 0.0, 0.0}}),
        trace("v-1", {{"ap-1", 6000.0, 0.0, 0.0}}),
        trace("v-2", {{"ap-0", 1800.0, 0.0, 0.0}, {"ap-1", 4200.0, 0.0, 0.0}}),
    }};
    s.iot_profiles = {{{"s-0", 2.0}, {"s-1", 3.0}, {"s-2", 1.0}}};
    s.settings.fallback_ap = "ap-0";
    return s;
}

inline ValidatedScenario validated(Scenario s) {
    auto r = validate_scenario(std::move(s));
    if (auto* d = std::get_if<std::vector<Diagnostic>>(&r))
        throw std::runtime_error("fixture does not validate:\n" + format_diagnostics(*d));
    return std::get<ValidatedScenario>(std::move(r));
}

inline RoundState first_round(const ValidatedScenario& vs, const PlacementMap& previous = {}) {
    return build_round(vs, RoundSpec{}, previous, vs.scenario.topology.nodes, vs.scenario.settings.utilization_cap);
}

} // namespace fixture
