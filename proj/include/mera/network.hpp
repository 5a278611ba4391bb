#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "mera/model.hpp"

namespace mera {

// Path summary between an access point (or fog node) and a host.
struct Route {
    bool reachable = false;
    int hops = 0;
    double delay = 0.0;                   // sum of per-hop propagation delays, s
    double request_rate = infinite_rate;  // bottleneck toward the host, bits/s
    double response_rate = infinite_rate; // bottleneck back toward the AP, bits/s
    double unit_cost = 0.0;               // sum of per-hop unit costs, $/byte
};

/// Static routing over the topology graph. Paths are BFS shortest in hop
/// count; among equal-length paths the one discovered through the
/// lexicographically smallest neighbour ids wins.
class Network {
public:
    Network() = default;
    explicit Network(const Topology& topology);

    const Route& ap_to_host(ApIndex ap, NodeIndex host) const {
        return ap_routes_[ap * node_count_ + host];
    }
    // Fog-to-cloud route used for container downloads.
    const Route& host_to_cloud(NodeIndex host) const { return cloud_routes_[host]; }
    NodeIndex nearest_cloud(NodeIndex host) const { return nearest_cloud_[host]; }

    std::size_t node_count() const { return node_count_; }
    std::size_t ap_count() const { return ap_count_; }

private:
    std::vector<Route> bfs_routes(std::size_t source) const;

    struct Edge {
        std::size_t to;
        std::size_t link;
        bool forward; // traversed a -> b
    };

    std::size_t node_count_ = 0;
    std::size_t ap_count_ = 0;
    std::vector<std::string> vertex_ids_;
    std::vector<std::vector<Edge>> adjacency_;
    std::vector<Link> links_;
    std::vector<std::size_t> node_vertex_;
    std::vector<std::size_t> ap_vertex_;
    std::vector<Route> ap_routes_;
    std::vector<Route> cloud_routes_;
    std::vector<NodeIndex> nearest_cloud_;
};

} // namespace mera
