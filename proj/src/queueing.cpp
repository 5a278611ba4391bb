#include "mera/queueing.hpp"

#include <cmath>
#include <limits>

#include "mera/units.hpp"

namespace mera {

ErlangC erlang_c(int n, double rho) {
    if (n < 1) throw UnstableQueueError("erlang_c: need at least one server");
    if (!(rho >= 0.0) || rho >= 1.0) throw UnstableQueueError("erlang_c: utilization must lie in [0,1)");
    const double a = n * rho;
    // Terms a^c/c! built by recurrence; rescaled whenever they grow large so
    // hundreds of servers stay finite. Only ratios matter for PQ.
    double term = 1.0;
    double sum = 0.0;
    double log_scale = 0.0;
    for (int c = 0; c < n; ++c) {
        sum += term;
        term = term * a / (c + 1);
        if (term > 1e200) {
            term *= 1e-200;
            sum *= 1e-200;
            log_scale += 200.0 * std::log(10.0);
        }
    }
    const double tail = term / (1.0 - rho);
    ErlangC out;
    out.wait_prob = tail / (sum + tail);
    out.empty_prob = std::exp(-log_scale) / (sum + tail);
    return out;
}

QueueAssessment assess_queue(int unit_count, double unit_rate, double cpu_capacity,
                             double share, double arrival) {
    QueueAssessment q;
    const double served = cpu_capacity * share;
    q.utilization = served > 0.0 ? arrival / served : std::numeric_limits<double>::infinity();
    if (!(q.utilization < 1.0) || !(share > 0.0) || unit_count < 1) {
        q.stable = false;
        q.wait_prob = 1.0;
        q.empty_prob = 0.0;
        q.waiting_time = std::numeric_limits<double>::infinity();
        return q;
    }
    ErlangC ec = erlang_c(unit_count, q.utilization);
    q.wait_prob = ec.wait_prob;
    q.empty_prob = ec.empty_prob;
    q.waiting_time = ec.wait_prob / (served - arrival) + 1.0 / (unit_rate * share);
    return q;
}

double waiting_time(int unit_count, double unit_rate, double cpu_capacity,
                    double share, double arrival) {
    if (!(share > 0.0 && share <= 1.0)) throw UnstableQueueError("waiting_time: share must lie in (0,1]");
    if (!(arrival < cpu_capacity * share)) throw UnstableQueueError("waiting_time: arrival rate saturates the share");
    return assess_queue(unit_count, unit_rate, cpu_capacity, share, arrival).waiting_time;
}

QueueAssessment assess_queue(const Service& service, const Node& node, double host_cpu_demand) {
    if (node.unbounded) {
        QueueAssessment q;
        q.utilization = 0.0;
        q.waiting_time = 1.0 / node.unit_rate;
        return q;
    }
    double share = host_cpu_demand > 0.0 ? service.cpu_demand / host_cpu_demand : 1.0;
    return assess_queue(node.unit_count, node.unit_rate, node.cpu_capacity, share, service.cpu_load());
}

double waiting_time(const Service& service, const Node& node, double host_cpu_demand) {
    if (node.unbounded) return 1.0 / node.unit_rate;
    double share = host_cpu_demand > 0.0 ? service.cpu_demand / host_cpu_demand : 1.0;
    return waiting_time(node.unit_count, node.unit_rate, node.cpu_capacity, share, service.cpu_load());
}

double access_delay(const Service& service, const AccessPoint& ap, const Route& route) {
    const double q_bits = service.request_size * units::bits_per_byte;
    const double a_bits = service.response_size * units::bits_per_byte;
    double d = 2.0 * (ap.radio_delay + route.delay);
    d += q_bits / ap.uplink_rate + a_bits / ap.downlink_rate;
    d += q_bits / route.request_rate + a_bits / route.response_rate;
    return d;
}

namespace {

const Route& checked_route(const Network& network, ApIndex m, NodeIndex host, const Topology& topology) {
    const Route& r = network.ap_to_host(m, host);
    if (!r.reachable)
        throw UnreachableHostError("no path from access point '" + topology.access_points[m].id +
                                   "' to host '" + topology.nodes[host].id + "'");
    return r;
}

} // namespace

double service_delay(const Service& service, NodeIndex host, const std::vector<ApShare>& coverage,
                     const Topology& topology, const Network& network, double waiting) {
    double e = waiting;
    for (const auto& s : coverage) {
        if (s.probability <= 0.0) continue;
        const Route& r = checked_route(network, s.ap, host, topology);
        e += s.probability * access_delay(service, topology.access_points[s.ap], r);
    }
    return e;
}

double violation_fraction(const Service& service, NodeIndex host, const std::vector<ApShare>& coverage,
                          const Topology& topology, const Network& network, double waiting,
                          double extra_delay) {
    double v = 0.0;
    for (const auto& s : coverage) {
        if (s.probability <= 0.0) continue;
        const Route& r = checked_route(network, s.ap, host, topology);
        double e = waiting + extra_delay + access_delay(service, topology.access_points[s.ap], r);
        if (e >= service.deadline) v += s.probability;
    }
    return std::min(v, 1.0);
}

} // namespace mera
