#include <doctest.h>

#include "fixture.hpp"
#include "mera/mobility.hpp"

using namespace mera;

TEST_CASE("connection_probability examples") {
    CHECK(connection_probability(CoverageSegment{"a", 3000.0, 0.0, 0.0}, 20.0, 300.0) == doctest::Approx(0.5));
    CHECK(connection_probability(CoverageSegment{"a", 6000.0, 0.0, 0.0}, 20.0, 300.0) == 1.0);
    CHECK(connection_probability(CoverageSegment{"a", 9000.0, 0.0, 0.0}, 20.0, 300.0) == 1.0);
    CHECK(connection_probability(CoverageSegment{"a", 100.0, 4.0, 2.0}, 20.0, 300.0) == 0.0);
    // Registration and waiting are subtracted from the dwell time.
    CHECK(connection_probability(CoverageSegment{"a", 3000.0, 20.0, 10.0}, 20.0, 300.0) == doctest::Approx(0.4));
}

TEST_CASE("connection_probability of a trace") {
    MobilityTrace t{"v", 10.0, {{"a", 1500.0, 0.0, 0.0}, {"b", 600.0, 0.0, 0.0}}};
    CHECK(connection_probability(t, "a", 300.0) == doctest::Approx(0.5));
    CHECK(connection_probability(t, "b", 300.0) == doctest::Approx(0.2));
    CHECK(connection_probability(t, "missing", 300.0) == 0.0);
}

TEST_CASE("connectivity_time examples") {
    CHECK(connectivity_time(0.5, 300.0) == 150.0);
    CHECK(connectivity_time(0.0, 300.0) == 0.0);
    CHECK(connectivity_time(1.0, 300.0) == 300.0);
}

TEST_CASE("connection_probability monotonicity") {
    double prev = -1.0;
    for (double l = 0.0; l <= 8000.0; l += 250.0) {
        double p = connection_probability(CoverageSegment{"a", l, 5.0, 5.0}, 15.0, 300.0);
        CHECK(p >= prev);
        prev = p;
    }
    prev = 2.0;
    for (double s = 5.0; s <= 40.0; s += 1.0) {
        double p = connection_probability(CoverageSegment{"a", 3000.0, 5.0, 5.0}, s, 300.0);
        CHECK(p <= prev);
        prev = p;
    }
    prev = 2.0;
    for (double t = 0.0; t <= 200.0; t += 10.0) {
        double p = connection_probability(CoverageSegment{"a", 3000.0, t, 5.0}, 20.0, 300.0);
        double q = connection_probability(CoverageSegment{"a", 3000.0, 5.0, t}, 20.0, 300.0);
        CHECK(p <= prev);
        CHECK(p == doctest::Approx(q));
        prev = p;
    }
}

TEST_CASE("vehicle_coverage renormalises overlapping coverage") {
    Scenario s = fixture::small_scenario();
    const Topology& t = s.topology;

    MobilityTrace both{"v", 20.0, {{"ap-0", 4500.0, 0.0, 0.0}, {"ap-1", 4500.0, 0.0, 0.0}}};
    auto cov = vehicle_coverage(both, t, 300.0);
    REQUIRE(cov.size() == 2);
    CHECK(cov[0].probability == doctest::Approx(0.5));
    CHECK(cov[1].probability == doctest::Approx(0.5));

    MobilityTrace partial{"v", 20.0, {{"ap-1", 1800.0, 0.0, 0.0}, {"ap-0", 1200.0, 0.0, 0.0}, {"nowhere", 1e6, 0, 0}}};
    cov = vehicle_coverage(partial, t, 300.0);
    REQUIRE(cov.size() == 2);
    CHECK(cov[0].ap == 0);
    CHECK(cov[0].probability == doctest::Approx(0.2));
    CHECK(cov[1].probability == doctest::Approx(0.3));
    CHECK(dominant_ap(cov, 0) == 1);

    MobilityTrace gone{"v", 20.0, {{"ap-0", 10.0, 5.0, 0.0}}};
    cov = vehicle_coverage(gone, t, 300.0);
    CHECK(cov.empty());
    CHECK(dominant_ap(cov, 1) == 1);

    // Ties go to the lower AP index.
    CHECK(dominant_ap({{0, 0.4}, {1, 0.4}}, 1) == 0);

    // Property: every synthetic-style mixture sums to at most one.
    for (double a = 0.0; a <= 9000.0; a += 900.0)
        for (double b = 0.0; b <= 9000.0; b += 900.0) {
            MobilityTrace m{"v", 20.0, {{"ap-0", a, 1.0, 0.0}, {"ap-1", b, 0.0, 2.0}}};
            double sum = 0.0;
            for (const auto& sh : vehicle_coverage(m, t, 300.0)) {
                CHECK(sh.probability >= 0.0);
                CHECK(sh.probability <= 1.0);
                sum += sh.probability;
            }
            CHECK(sum <= 1.0 + 1e-12);
        }
}
