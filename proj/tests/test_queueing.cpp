#include <doctest.h>

#include <cmath>
#include <limits>

#include "mera/network.hpp"
#include "mera/queueing.hpp"
#include "mera/units.hpp"

using namespace mera;

namespace {

// Term-by-term Erlang C with explicit factorials, long double throughout.
struct Oracle {
    long double p0;
    long double pq;
};

Oracle erlang_oracle(int n, double rho) {
    long double a = static_cast<long double>(n) * rho;
    long double sum = 0.0L;
    for (int c = 0; c < n; ++c) sum += std::pow(a, c) / std::tgamma(static_cast<long double>(c) + 1.0L);
    long double tail = std::pow(a, n) / (std::tgamma(static_cast<long double>(n) + 1.0L) * (1.0L - rho));
    long double p0 = 1.0L / (sum + tail);
    return {p0, tail * p0};
}

// AP(s) wired straight to one host: one link per AP with the given delay.
Topology star(const std::vector<double>& delays_ms, double rate = infinite_rate) {
    Topology t;
    Node n;
    n.id = "h";
    n.cpu_capacity = n.unit_rate = 1000.0;
    t.nodes.push_back(n);
    for (std::size_t k = 0; k < delays_ms.size(); ++k) {
        AccessPoint ap;
        ap.id = "ap-" + std::to_string(k);
        ap.radio_delay = 1.0 * units::millisecond;
        ap.uplink_rate = ap.downlink_rate = rate;
        ap.coverage_radius = 1.0;
        t.access_points.push_back(ap);
        Link l;
        l.a = ap.id;
        l.b = "h";
        l.delay = delays_ms[k] * units::millisecond;
        l.uplink_rate = l.downlink_rate = rate;
        t.links.push_back(l);
    }
    return t;
}

Service svc(double deadline = 1.0) {
    Service s;
    s.id = "s";
    s.cpu_demand = 10.0;
    s.request_size = 1000.0;
    s.response_size = 1000.0;
    s.arrival_rate = 1.0;
    s.deadline = deadline;
    s.qos_level = 0.9;
    return s;
}

} // namespace

TEST_CASE("erlang_c examples") {
    CHECK(erlang_c(1, 0.5).wait_prob == doctest::Approx(0.5).epsilon(1e-15));
    auto two = erlang_c(2, 0.5);
    CHECK(two.empty_prob == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(two.wait_prob == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    auto four = erlang_c(4, 0.9);
    CHECK(std::abs(four.wait_prob - static_cast<double>(erlang_oracle(4, 0.9).pq)) < 1e-12);
}

TEST_CASE("erlang_c rejects unstable or empty queues") {
    CHECK_THROWS_AS(erlang_c(3, 1.0), UnstableQueueError);
    CHECK_THROWS_AS(erlang_c(3, 1.5), UnstableQueueError);
    CHECK_THROWS_AS(erlang_c(0, 0.5), UnstableQueueError);
}

TEST_CASE("erlang_c matches the summation oracle and its monotonicity") {
    for (int n = 1; n <= 64; ++n) {
        double prev = -1.0;
        for (int k = 1; k <= 19; ++k) {
            double rho = 0.05 * k;
            auto e = erlang_c(n, rho);
            auto o = erlang_oracle(n, rho);
            CHECK(std::abs(e.wait_prob - static_cast<double>(o.pq)) < 1e-12);
            CHECK(std::abs(e.empty_prob - static_cast<double>(o.p0)) < 1e-12);
            CHECK(e.wait_prob >= prev);
            prev = e.wait_prob;
            if (n > 1) CHECK(e.wait_prob <= erlang_c(n - 1, rho).wait_prob + 1e-15);
        }
    }
    // The recurrence stays finite well past where n! overflows.
    auto big = erlang_c(400, 0.9);
    CHECK(std::isfinite(big.wait_prob));
    CHECK(big.wait_prob > 0.0);
    CHECK(big.wait_prob < 1.0);
}

TEST_CASE("waiting_time examples") {
    CHECK(waiting_time(1, 100.0, 100.0, 1.0, 50.0) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(waiting_time(4, 250.0, 1000.0, 0.5, 0.0) == doctest::Approx(1.0 / 125.0).epsilon(1e-12));
    CHECK_THROWS_AS(waiting_time(1, 100.0, 100.0, 1.0, 100.0), UnstableQueueError);
    CHECK_THROWS_AS(waiting_time(1, 100.0, 100.0, 0.0, 1.0), UnstableQueueError);

    double prev = 0.0;
    for (double zeta = 0.0; zeta < 499.0; zeta += 7.0) {
        double w = waiting_time(3, 200.0, 600.0, 5.0 / 6.0, zeta);
        CHECK(w > prev);
        prev = w;
    }
    auto q = assess_queue(1, 100.0, 100.0, 1.0, 100.0);
    CHECK_FALSE(q.stable);
    CHECK(std::isinf(q.waiting_time));
}

TEST_CASE("single-unit waiting time is the M/M/1 sojourn") {
    int points = 0;
    for (int a = 0; a < 10; ++a) {
        double mu = 50.0 + 95.0 * a;
        for (int b = 0; b < 10; ++b) {
            double f = 0.1 + 0.1 * b;
            for (int c = 0; c < 10; ++c) {
                double zeta = mu * f * (0.05 + 0.09 * c);
                double expected = 1.0 / (mu * f - zeta);
                CHECK(std::abs(waiting_time(1, mu, mu, f, zeta) - expected) < 1e-9);
                ++points;
            }
        }
    }
    CHECK(points == 1000);
}

TEST_CASE("the service share scales waiting on a shared host") {
    Node n;
    n.unit_count = 2;
    n.unit_rate = 500.0;
    n.cpu_capacity = 1000.0;
    Service s = svc();
    s.arrival_rate = 4.0; // 40 MI/s
    // Alone: whole host. Next to 30 MI/request of others: one quarter.
    CHECK(waiting_time(s, n, 10.0) == doctest::Approx(waiting_time(2, 500.0, 1000.0, 1.0, 40.0)));
    CHECK(waiting_time(s, n, 40.0) == doctest::Approx(waiting_time(2, 500.0, 1000.0, 0.25, 40.0)));
    n.unbounded = true;
    CHECK(waiting_time(s, n, 1e9) == doctest::Approx(1.0 / 500.0));
}

TEST_CASE("service_delay examples") {
    Topology t = star({1.0});
    Network net(t);
    Service s = svc();
    CHECK(service_delay(s, 0, {{0, 1.0}}, t, net, 0.002) == doctest::Approx(0.006).epsilon(1e-12));
    CHECK(service_delay(s, 0, {}, t, net, 0.002) == doctest::Approx(0.002));

    Topology t2 = star({1.0, 1.0});
    Network net2(t2);
    CHECK(service_delay(s, 0, {{0, 0.5}, {1, 0.5}}, t2, net2, 0.002) == doctest::Approx(0.006).epsilon(1e-12));
}

TEST_CASE("service_delay is linear in propagation and non-increasing in bandwidth") {
    Service s = svc();
    auto delay = [&](double d_ms, double rate) {
        Topology t = star({d_ms}, rate);
        Network net(t);
        return service_delay(s, 0, {{0, 1.0}}, t, net, 0.0);
    };
    double d1 = delay(1.0, 1e7), d2 = delay(2.0, 1e7), d3 = delay(3.0, 1e7);
    CHECK(d3 - d2 == doctest::Approx(d2 - d1).epsilon(1e-12));
    CHECK(delay(1.0, 1e6) > delay(1.0, 1e7));
    CHECK(delay(1.0, 1e7) > delay(1.0, 1e8));
    // Transmission: q and a each cross the AP leg and the routed leg once.
    double tx = 2.0 * (1000.0 * 8.0 / 1e7) + 2.0 * (1000.0 * 8.0 / 1e7);
    CHECK(d1 == doctest::Approx(2.0 * (0.001 + 0.001) + tx).epsilon(1e-12));
}

TEST_CASE("service_delay reports unreachable hosts") {
    Topology t = star({1.0});
    AccessPoint orphan = t.access_points[0];
    orphan.id = "orphan";
    t.access_points.push_back(orphan);
    Network net(t);
    CHECK_THROWS_AS(service_delay(svc(), 0, {{1, 1.0}}, t, net, 0.0), UnreachableHostError);
}

TEST_CASE("violation_fraction examples") {
    // Per-AP delays (before waiting): 4 ms through ap-0, 22 ms through ap-1.
    Topology t = star({1.0, 10.0});
    Network net(t);
    Service s = svc(0.010);
    CHECK(violation_fraction(s, 0, {{0, 0.7}, {1, 0.3}}, t, net, 0.001) == doctest::Approx(0.3));
    CHECK(violation_fraction(s, 0, {{0, 1.0}}, t, net, 0.001) == doctest::Approx(0.0));
    CHECK(violation_fraction(s, 0, {{0, 0.4}, {1, 0.6}}, t, net, 0.050) == doctest::Approx(1.0));
    // Container start pushes the compliant AP over as well.
    CHECK(violation_fraction(s, 0, {{0, 0.7}, {1, 0.3}}, t, net, 0.001, 0.050) == doctest::Approx(1.0));
    for (double w = 0.0; w < 0.05; w += 0.001) {
        double v = violation_fraction(s, 0, {{0, 0.7}, {1, 0.3}}, t, net, w);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}
