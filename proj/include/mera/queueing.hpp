#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mera/model.hpp"
#include "mera/network.hpp"

namespace mera {

class UnstableQueueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnreachableHostError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ErlangC {
    double empty_prob = 1.0; // P0
    double wait_prob = 0.0;  // PQ
};

// M/M/n with per-server load factor rho. Throws UnstableQueueError when
// rho >= 1 (or n < 1).
ErlangC erlang_c(int n, double rho);

struct QueueAssessment {
    double utilization = 0.0;
    double wait_prob = 0.0;
    double empty_prob = 1.0;
    double waiting_time = 0.0;
    bool stable = true;
};

// Queue seen by one service that obtains the fraction `share` of a host's
// processing units and offers `arrival` MI/s. Never throws; unstable queues
// report an infinite waiting time.
QueueAssessment assess_queue(int unit_count, double unit_rate, double cpu_capacity,
                             double share, double arrival);

// Waiting time (queueing plus processing), seconds. Throws UnstableQueueError
// when arrival >= cpu_capacity * share.
double waiting_time(int unit_count, double unit_rate, double cpu_capacity,
                    double share, double arrival);

// Same, for a service on a concrete node. `host_cpu_demand` is the summed
// per-request CPU demand of every service sharing the host (including this
// one); it fixes the share f = L_i / sum L. Unbounded hosts give the service
// a whole unit with no queueing.
double waiting_time(const Service& service, const Node& node, double host_cpu_demand);
QueueAssessment assess_queue(const Service& service, const Node& node, double host_cpu_demand);

// Propagation and transmission delay of one request/response exchange made
// through access point `ap` towards a host reached over `route`.
double access_delay(const Service& service, const AccessPoint& ap, const Route& route);

// Expected end-to-end delay: waiting time plus the probability-weighted
// access delays. Throws UnreachableHostError if a covering AP has no path.
double service_delay(const Service& service, NodeIndex host, const std::vector<ApShare>& coverage,
                     const Topology& topology, const Network& network, double waiting);

// Probability-weighted share of traffic whose per-AP delay reaches the
// deadline. `extra_delay` is added to every per-AP delay (container start).
double violation_fraction(const Service& service, NodeIndex host, const std::vector<ApShare>& coverage,
                          const Topology& topology, const Network& network, double waiting,
                          double extra_delay = 0.0);

} // namespace mera
