#include "mera/model.hpp"

namespace mera {

std::optional<NodeIndex> Topology::find_node(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id == id) return i;
    return std::nullopt;
}

std::optional<ApIndex> Topology::find_ap(const std::string& id) const {
    for (std::size_t i = 0; i < access_points.size(); ++i)
        if (access_points[i].id == id) return i;
    return std::nullopt;
}

std::optional<std::size_t> Topology::find_router(const std::string& id) const {
    for (std::size_t i = 0; i < routers.size(); ++i)
        if (routers[i].id == id) return i;
    return std::nullopt;
}

std::vector<NodeIndex> Topology::fog_nodes() const {
    std::vector<NodeIndex> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!nodes[i].is_cloud()) out.push_back(i);
    return out;
}

std::vector<NodeIndex> Topology::cloud_nodes() const {
    std::vector<NodeIndex> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].is_cloud()) out.push_back(i);
    return out;
}

std::vector<NodeIndex> RoundState::active_fogs() const {
    std::vector<NodeIndex> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!nodes[i].is_cloud() && nodes[i].active) out.push_back(i);
    return out;
}

std::vector<NodeIndex> RoundState::active_hosts() const {
    std::vector<NodeIndex> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].active) out.push_back(i);
    return out;
}

std::size_t RoundState::active_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes) n += node.active ? 1 : 0;
    return n;
}

double service_credit_fraction(double qos_level) {
    // Credit tiers of a monthly-uptime style SLA.
    if (qos_level < 0.95) return 1.0;
    if (qos_level < 0.99) return 0.30;
    return 0.10;
}

double resolve_violation_cost(const Service& service, const ScenarioSettings& settings) {
    if (settings.credit_basis_requests <= 0.0) return 0.0;
    return service_credit_fraction(service.qos_level) * service.monthly_price /
           settings.credit_basis_requests;
}

const char* to_string(NodeKind kind) {
    return kind == NodeKind::cloud ? "cloud" : "fog";
}

const char* to_string(RouterKind kind) {
    switch (kind) {
    case RouterKind::edge_router: return "edge-router";
    case RouterKind::core_router: return "core-router";
    case RouterKind::ethernet_switch: return "switch";
    case RouterKind::base_station: return "base-station";
    }
    return "edge-router";
}

const char* to_string(LinkTier tier) {
    switch (tier) {
    case LinkTier::intra_edge: return "intra-edge";
    case LinkTier::core: return "core";
    case LinkTier::cloud: return "cloud";
    }
    return "intra-edge";
}

std::optional<NodeKind> parse_node_kind(const std::string& s) {
    if (s == "fog") return NodeKind::fog;
    if (s == "cloud") return NodeKind::cloud;
    return std::nullopt;
}

std::optional<RouterKind> parse_router_kind(const std::string& s) {
    if (s == "edge-router") return RouterKind::edge_router;
    if (s == "core-router") return RouterKind::core_router;
    if (s == "switch") return RouterKind::ethernet_switch;
    if (s == "base-station") return RouterKind::base_station;
    return std::nullopt;
}

std::optional<LinkTier> parse_link_tier(const std::string& s) {
    if (s == "intra-edge") return LinkTier::intra_edge;
    if (s == "core") return LinkTier::core;
    if (s == "cloud") return LinkTier::cloud;
    return std::nullopt;
}

} // namespace mera
