#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mera {

using NodeIndex = std::size_t;
using ApIndex = std::size_t;
using ServiceIndex = std::size_t;

inline constexpr std::size_t no_index = std::numeric_limits<std::size_t>::max();
inline constexpr double infinite_rate = std::numeric_limits<double>::infinity();

enum class NodeKind { fog, cloud };

/// A compute host with CPU, RAM and storage capacities.
///
/// For `unbounded` hosts (cloud centers) the capacities are reference values
/// used for utilization shares and energy accounting only; feasibility checks
/// never bind on them.
struct Node {
    std::string id;
    NodeKind kind = NodeKind::fog;
    double cpu_capacity = 0.0;     // MIPS
    double ram_capacity = 0.0;     // bytes
    double storage_capacity = 0.0; // bytes
    int unit_count = 1;
    double unit_rate = 0.0;        // MIPS per processing unit
    double idle_power = 0.0;       // W
    double max_power = 0.0;        // W
    double renewable_ratio = 0.0;
    double pue = 1.0;
    bool active = true;
    bool unbounded = false;
    std::string attached_router;

    bool is_cloud() const { return kind == NodeKind::cloud; }
};

// Energy per transferred byte, split by direction (J/byte). Requests travel
// upstream, responses downstream.
struct TransferEnergy {
    double upload = 0.0;
    double download = 0.0;
};

struct AccessPoint {
    std::string id;
    double x = 0.0; // m
    double y = 0.0; // m
    double coverage_radius = 0.0; // m
    double renewable_ratio = 0.0;
    TransferEnergy transfer_energy;
    double uplink_rate = 0.0;   // bits/s, vehicle -> AP
    double downlink_rate = 0.0; // bits/s, AP -> vehicle
    double radio_delay = 0.0;   // s, vehicle <-> AP propagation
    std::string colocated_fog;  // empty when no fog shares the site
};

enum class RouterKind { edge_router, core_router, ethernet_switch, base_station };

struct RouterProfile {
    std::string id;
    RouterKind kind = RouterKind::edge_router;
    TransferEnergy transfer_energy;
};

enum class LinkTier { intra_edge, core, cloud };

/// Undirected link. Traversing from `a` to `b` is the "up" direction.
struct Link {
    std::string a;
    std::string b;
    double delay = 0.0;         // s
    double uplink_rate = 0.0;   // bits/s
    double downlink_rate = 0.0; // bits/s
    double unit_cost = 0.0;     // $/byte
    LinkTier tier = LinkTier::intra_edge;
};

struct NodePrices {
    double cpu = 0.0;     // $/MI
    double ram = 0.0;     // $/(byte s)
    double storage = 0.0; // $/(byte s)
};

struct PriceBook {
    std::vector<NodePrices> node; // aligned with Topology::nodes
    double nonrenewable_energy = 0.0; // $/kWh
    double renewable_energy = 0.0;    // $/kWh
    double carbon = 0.0;              // $/kg
    double emission_rate = 0.0;       // kg CO2 / kWh
};

struct Service {
    std::string id;
    std::string vehicle;
    double cpu_demand = 0.0;     // MI per request
    double ram_demand = 0.0;     // bytes
    double storage_demand = 0.0; // bytes
    double request_size = 0.0;   // bytes
    double response_size = 0.0;  // bytes
    double arrival_rate = 0.0;   // requests/s; set per round from the IoT profile
    double deadline = 0.0;       // s
    double qos_level = 0.0;      // eta, in (0,1)
    double monthly_price = 0.0;  // $ per month for one service instance
    double violation_unit_cost = 0.0; // $/request, resolved at load time

    // CPU load offered to a host, MI/s.
    double cpu_load() const { return cpu_demand * arrival_rate; }
};

struct CoverageSegment {
    std::string ap;
    double coverage_length = 0.0;   // m
    double registration_time = 0.0; // s
    double wait_time = 0.0;         // s
};

struct MobilityTrace {
    std::string vehicle;
    double speed = 0.0; // m/s
    std::vector<CoverageSegment> segments;
};

struct ScenarioSettings {
    double slot_length = 300.0;      // tau, s
    double utilization_cap = 0.9;    // fog resources usable up to this share
    double startup_delay = 0.05;     // s, container start on round 0
    double eur_to_usd = 1.08;
    // Number of requests one month of SLA credit is spread over when turning
    // the credit percentage into a per-request violation price.
    double credit_basis_requests = 1.0e4;
    int rounds_per_profile = 3;
    std::string fallback_ap;
};

struct Topology {
    std::vector<Node> nodes;
    std::vector<AccessPoint> access_points;
    std::vector<RouterProfile> routers;
    std::vector<Link> links;
    std::vector<std::string> vehicles; // registry of vehicle ids

    std::optional<NodeIndex> find_node(const std::string& id) const;
    std::optional<ApIndex> find_ap(const std::string& id) const;
    std::optional<std::size_t> find_router(const std::string& id) const;
    std::vector<NodeIndex> fog_nodes() const;
    std::vector<NodeIndex> cloud_nodes() const;
};

/// Raw scenario as loaded from disk or generated.
struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    Topology topology;
    PriceBook prices;
    std::vector<Service> services; // catalog; arrival rates are per profile
    std::vector<std::vector<MobilityTrace>> traces; // indexed by mobility round
    // profile -> service id -> arrival rate (req/s)
    std::vector<std::unordered_map<std::string, double>> iot_profiles;
    ScenarioSettings settings;
};

/// Service id -> host of that service in the previous round.
using PlacementMap = std::unordered_map<std::string, NodeIndex>;

struct ApShare {
    ApIndex ap = 0;
    double probability = 0.0;
};

/// Inputs of one decision round. Built by the harness and never modified
/// while strategies run on it.
struct RoundState {
    int round_index = 0;
    int profile_index = 0;
    double slot_length = 300.0;
    PlacementMap previous_placement;
    std::vector<Node> nodes; // effective node set (active flags, scaled capacities)
    std::vector<Service> services;
    std::vector<MobilityTrace> traces;
    // Per service: normalized connection probabilities and the AP whose
    // colocated fog receives the request.
    std::vector<std::vector<ApShare>> coverage;
    std::vector<ApIndex> dominant_ap;
    bool apply_startup_delay = false;
    double startup_delay = 0.0;
    double utilization_cap = 0.9;

    std::vector<NodeIndex> active_fogs() const;
    std::vector<NodeIndex> active_hosts() const;
    std::size_t active_count() const;
};

// Fraction of a month's instance price refunded for a QoS tier.
double service_credit_fraction(double qos_level);

// Per-request violation price from the monthly price and QoS tier.
double resolve_violation_cost(const Service& service, const ScenarioSettings& settings);

const char* to_string(NodeKind kind);
const char* to_string(RouterKind kind);
const char* to_string(LinkTier tier);
std::optional<NodeKind> parse_node_kind(const std::string& s);
std::optional<RouterKind> parse_router_kind(const std::string& s);
std::optional<LinkTier> parse_link_tier(const std::string& s);

} // namespace mera
