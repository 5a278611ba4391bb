#include <doctest.h>

#include <cmath>

#include "fixture.hpp"
#include "mera/cost.hpp"
#include "mera/queueing.hpp"
#include "mera/units.hpp"

using namespace mera;

namespace {

constexpr double tau = 300.0;
constexpr double per_kwh = 1.0 / units::joules_per_kwh;

Assignment one(ServiceIndex i, NodeIndex j) {
    Assignment a;
    a.push(i, j);
    return a;
}

void check_components_sum(const CostBreakdown& c) {
    double sum = c.processing + c.ram + c.storage + c.deployment + c.communication + c.energy + c.carbon + c.violation;
    CHECK(c.total == doctest::Approx(sum).epsilon(1e-9));
}

} // namespace

TEST_CASE("empty plan costs nothing") {
    auto vs = fixture::validated(fixture::small_scenario());
    auto st = fixture::first_round(vs);
    CostModel m(vs, st);
    Assignment none;
    auto r = resource_cost(none, m);
    CHECK(r.processing == 0.0);
    CHECK(r.ram == 0.0);
    CHECK(r.storage == 0.0);
    auto c = total_local_cost(none, m);
    CHECK(c.total == 0.0);
    CHECK(c.nonrenewable_power == 0.0);
    CHECK(communication_cost(none, m) == 0.0);
}

TEST_CASE("processing cost example and linearity in the slot") {
    auto vs = fixture::validated(fixture::small_scenario());
    auto st = fixture::first_round(vs);
    REQUIRE(st.services.size() == 3);
    REQUIRE(st.services[0].arrival_rate == 2.0);
    CostModel m(vs, st);
    // z=2 req/s, 100 MI, 2e-7 $/MI on the cloud, 300 s.
    CHECK(resource_cost(one(0, 2), m).processing == doctest::Approx(0.012).epsilon(1e-12));

    auto base = total_local_cost(one(0, 0), m);
    RoundState doubled = st;
    doubled.slot_length = 2.0 * tau;
    CostModel m2(vs, doubled);
    auto twice = total_local_cost(one(0, 0), m2);
    CHECK(twice.processing == doctest::Approx(2.0 * base.processing));
    CHECK(twice.ram == doctest::Approx(2.0 * base.ram));
    CHECK(twice.storage == doctest::Approx(2.0 * base.storage));
    CHECK(twice.communication == doctest::Approx(2.0 * base.communication));
    CHECK(twice.energy == doctest::Approx(2.0 * base.energy));
    CHECK(twice.carbon == doctest::Approx(2.0 * base.carbon));
    CHECK(twice.deployment == doctest::Approx(base.deployment));
}

TEST_CASE("deployment cost examples") {
    Scenario s = fixture::small_scenario();
    s.topology.links[1].unit_cost = 0.0; // fog-0 reaches the cloud at 0.07 $/GiB
    auto vs = fixture::validated(s);
    auto fresh = fixture::first_round(vs);
    CostModel m(vs, fresh);
    // 100 MiB at 0.07 $/GiB.
    CHECK(deployment_cost(one(0, 0), m) == doctest::Approx(0.0068359375).epsilon(1e-12));
    CHECK(deployment_cost(one(0, 2), m) == 0.0);

    auto kept = fixture::first_round(vs, {{"s-0", 0}});
    CostModel mk(vs, kept);
    CHECK(deployment_cost(one(0, 0), mk) == 0.0);
    // Moving away from the previous host is a fresh deployment.
    CHECK(deployment_cost(one(0, 1), mk) > 0.0);
}

TEST_CASE("communication cost examples") {
    Scenario s = fixture::small_scenario();
    for (auto& l : s.topology.links) l.unit_cost = 0.0;
    // ap-1 -> fog-0 crosses a single priced link at 0.02 $/GB (decimal),
    // q + a = 20 kB, z = 2.
    s.topology.links[4].unit_cost = 0.02 / 1e9;
    s.services[1].request_size = s.services[1].response_size = 10e3;
    s.iot_profiles[0]["s-1"] = 2.0;
    auto vs = fixture::validated(s);
    auto st = fixture::first_round(vs);
    CostModel m(vs, st);
    CHECK(communication_cost(one(0, 0), m) == 0.0);
    CHECK(communication_cost(one(1, 0), m) == doctest::Approx(2.4e-4).epsilon(1e-12));
    // The colocated fog is a zero-hop path, whatever its links cost.
    CHECK(communication_cost(one(1, 1), m) == 0.0);

    // Linear in the connection shares: two APs with equal path cost.
    Scenario e = fixture::small_scenario();
    for (auto& l : e.topology.links) l.unit_cost = 0.0;
    e.topology.links[5].unit_cost = 0.05 / units::gib; // er-0 -> cloud
    e.topology.links[4].unit_cost = 0.0;
    auto ve = fixture::validated(e);
    auto se = fixture::first_round(ve);
    CostModel me(ve, se);
    // ap-1 reaches the cloud through er-1 -> er-0 -> sw-c: same cost as ap-0.
    double split = communication_cost(one(2, 2), me); // v-2 covers both APs (0.3 / 0.7)
    RoundState single = se;
    single.coverage[2] = {{0, 1.0}};
    CostModel ms(ve, single);
    CHECK(split == doctest::Approx(communication_cost(one(2, 2), ms)).epsilon(1e-12));
}

TEST_CASE("power, energy and carbon") {
    SUBCASE("zero load") {
        auto vs = fixture::validated(fixture::small_scenario());
        auto st = fixture::first_round(vs);
        for (auto& sv : st.services) sv.arrival_rate = 0.0;
        CostModel m(vs, st);
        Assignment a;
        a.push(0, 0);
        a.push(1, 1);
        a.push(2, 2);
        auto p = power_and_energy(a, m);
        CHECK(p.server_power_cost == 0.0);
        CHECK(p.network_power_cost == 0.0);
        CHECK(p.energy == 0.0);
        CHECK(p.nonrenewable_power == 0.0);
        CHECK(p.carbon == 0.0);
    }
    SUBCASE("fully renewable") {
        Scenario s = fixture::small_scenario();
        for (auto& n : s.topology.nodes) n.renewable_ratio = 1.0;
        for (auto& ap : s.topology.access_points) ap.renewable_ratio = 1.0;
        auto vs = fixture::validated(s);
        auto st = fixture::first_round(vs);
        CostModel m(vs, st);
        Assignment a;
        a.push(0, 0);
        a.push(1, 1);
        a.push(2, 2);
        auto p = power_and_energy(a, m);
        CHECK(p.nonrenewable_power == 0.0);
        CHECK(p.carbon == 0.0);
        CHECK(p.energy > 0.0);
    }
    SUBCASE("half-loaded fog, server term only") {
        Scenario s = fixture::small_scenario();
        for (auto& ap : s.topology.access_points) ap.transfer_energy = {0.0, 0.0};
        for (auto& r : s.topology.routers) r.transfer_energy = {0.0, 0.0};
        s.iot_profiles[0]["s-0"] = 200.0; // 20000 MI/s on a 40000 MIPS host
        auto vs = fixture::validated(s);
        auto st = fixture::first_round(vs);
        CostModel m(vs, st);
        auto p = power_and_energy(one(0, 0), m);
        const double cn = 0.20 * per_kwh;
        CHECK(p.server_power_cost == doctest::Approx(100.0 * cn).epsilon(1e-12));
        CHECK(p.network_power_cost == 0.0);
        CHECK(p.nonrenewable_power == doctest::Approx(100.0).epsilon(1e-12));
        CHECK(p.energy == doctest::Approx(tau * 100.0 * cn).epsilon(1e-12));
        CHECK(p.carbon == doctest::Approx(0.05 * 0.4 * 100.0 * tau * per_kwh).epsilon(1e-12));
    }
    SUBCASE("carbon rises as the renewable share falls") {
        double prev = -1.0;
        for (double pr = 1.0; pr >= -1e-9; pr -= 0.1) {
            Scenario s = fixture::small_scenario();
            s.topology.nodes[0].renewable_ratio = std::max(pr, 0.0);
            s.topology.access_points[0].renewable_ratio = 1.0;
            auto vs = fixture::validated(s);
            auto st = fixture::first_round(vs);
            CostModel m(vs, st);
            double carbon = power_and_energy(one(0, 0), m).carbon;
            CHECK(carbon > prev);
            prev = carbon;
        }
    }
}

TEST_CASE("violation cost examples") {
    Scenario s = fixture::small_scenario();
    s.traces[0][2] = fixture::trace("v-2", {{"ap-0", 600.0, 0.0, 0.0}, {"ap-1", 5400.0, 0.0, 0.0}});
    s.iot_profiles[0]["s-2"] = 2.0;
    auto vs = fixture::validated(s);
    auto st = fixture::first_round(vs);
    const Service& sv = st.services[2];
    REQUIRE(st.coverage[2].size() == 2);
    CHECK(st.coverage[2][0].probability == doctest::Approx(0.1));

    // Place the deadline between the two per-AP delays on fog-1.
    const auto& topo = vs.scenario.topology;
    double w = waiting_time(sv, topo.nodes[1], sv.cpu_demand);
    double via0 = w + access_delay(sv, topo.access_points[0], vs.network.ap_to_host(0, 1));
    double via1 = w + access_delay(sv, topo.access_points[1], vs.network.ap_to_host(1, 1));
    REQUIRE(via0 > via1);
    st.services[2].deadline = 0.5 * (via0 + via1);
    st.services[2].violation_unit_cost = 0.01;

    CostModel m(vs, st);
    CHECK(m.violation_fraction(2, 1, sv.cpu_demand) == doctest::Approx(0.1));
    // max(0, 0.10 - 0.05) * 2 * 0.01 * 300
    CHECK(violation_cost(one(2, 1), m) == doctest::Approx(0.30).epsilon(1e-12));

    // Within tolerance -> free; stricter QoS never cheaper.
    double prev = -1.0;
    for (double eta : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999}) {
        RoundState q = st;
        q.services[2].qos_level = eta;
        CostModel mq(vs, q);
        double c = violation_cost(one(2, 1), mq);
        if (eta < 0.9) CHECK(c == 0.0);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("two services sharing fog-0 match a hand-computed breakdown") {
    Scenario s = fixture::small_scenario();
    s.services[1].deadline = 0.012; // s-1 arrives over the long ap-1 path
    auto vs = fixture::validated(s);
    auto st = fixture::first_round(vs);
    CostModel m(vs, st);
    Assignment a;
    a.push(0, 0);
    a.push(1, 0);
    auto c = total_local_cost(a, m);

    const double q = 10.0 * units::kib, r = 10.0 * units::kib, mi = 100.0;
    const double z0 = 2.0, z1 = 3.0, p0 = 0.5, p1 = 1.0;
    const double cn = 0.20 * per_kwh; // every device on this path is non-renewable

    CHECK(c.processing == doctest::Approx((z0 + z1) * mi * 6e-7 * tau).epsilon(1e-12));
    CHECK(c.ram == doctest::Approx(2 * 256.0 * units::mib * 1e-15 * tau).epsilon(1e-12));
    CHECK(c.storage == doctest::Approx(2 * 100.0 * units::mib * 1e-16 * tau).epsilon(1e-12));
    CHECK(c.deployment == doctest::Approx(2 * 100.0 * units::mib * 0.08 / units::gib).epsilon(1e-12));
    // s-0 sits on its colocated fog: no path cost.
    const double comm = (q + r) * z1 * (0.06 / units::gib) * p1 * tau;
    CHECK(c.communication == doctest::Approx(comm).epsilon(1e-12));

    const double server_w = 200.0 * (z0 + z1) * mi / 40000.0;
    const double router_w = (z0 + z1) * (q * 1e-9 + r * 1e-9);
    const double ap_w = p0 * z0 * (q * 1e-8 + r * 2e-8) + p1 * z1 * (q * 1e-8 + r * 2e-8);
    CHECK(c.server_power_cost == doctest::Approx(server_w * cn).epsilon(1e-12));
    CHECK(c.network_power_cost == doctest::Approx((router_w + ap_w) * cn).epsilon(1e-12));
    CHECK(c.nonrenewable_power == doctest::Approx(server_w + router_w + ap_w).epsilon(1e-12));
    CHECK(c.energy == doctest::Approx(tau * (server_w + router_w + ap_w) * cn).epsilon(1e-12));
    CHECK(c.carbon == doctest::Approx(0.05 * 0.4 * (server_w + router_w + ap_w) * tau * per_kwh).epsilon(1e-12));

    // s-1 misses its deadline on every AP: excess 0.95, credit 30% of $10
    // over 1e4 requests.
    const double cv = 0.30 * 10.0 / 1e4;
    CHECK(c.violation == doctest::Approx(0.95 * z1 * cv * tau).epsilon(1e-12));
    check_components_sum(c);
}

TEST_CASE("disjoint placements add up") {
    auto vs = fixture::validated(fixture::small_scenario());
    auto st = fixture::first_round(vs);
    CostModel m(vs, st);
    Assignment both;
    both.push(0, 0);
    both.push(1, 1);
    auto c = total_local_cost(both, m);
    auto a = total_local_cost(one(0, 0), m);
    auto b = total_local_cost(one(1, 1), m);
    CHECK(c.total == doctest::Approx(a.total + b.total).epsilon(1e-12));
    CHECK(c.energy == doctest::Approx(a.energy + b.energy).epsilon(1e-12));
    check_components_sum(c);
    for (NodeIndex j = 0; j < 3; ++j)
        for (ServiceIndex i = 0; i < 3; ++i) {
            auto x = m.service_cost(i, j, st.services[i].cpu_demand);
            CHECK(x.processing >= 0.0);
            CHECK(x.deployment >= 0.0);
            CHECK(x.communication >= 0.0);
            CHECK(x.energy >= 0.0);
            CHECK(x.carbon >= 0.0);
            CHECK(x.violation >= 0.0);
            check_components_sum(x);
        }
}

TEST_CASE("utilization shares") {
    auto vs = fixture::validated(fixture::small_scenario());
    auto st = fixture::first_round(vs);
    CostModel m(vs, st);
    Assignment a;
    a.push(0, 0);
    a.push(2, 0);
    auto g = m.utilization(a);
    REQUIRE(g.size() == 6);
    CHECK(g[0] == doctest::Approx((2.0 + 1.0) * 100.0 / 40000.0));
    CHECK(g[1] == doctest::Approx(2 * 256.0 / 4096.0));
    CHECK(g[2] == 0.0);
}
