#include "mera/network.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace mera {

Network::Network(const Topology& topology)
    : node_count_(topology.nodes.size()),
      ap_count_(topology.access_points.size()),
      links_(topology.links) {
    std::map<std::string, std::size_t> ids;
    auto vertex = [&](const std::string& id) {
        auto it = ids.find(id);
        if (it != ids.end()) return it->second;
        std::size_t v = vertex_ids_.size();
        ids.emplace(id, v);
        vertex_ids_.push_back(id);
        return v;
    };
    for (const auto& n : topology.nodes) node_vertex_.push_back(vertex(n.id));
    for (const auto& ap : topology.access_points) ap_vertex_.push_back(vertex(ap.id));
    for (const auto& r : topology.routers) vertex(r.id);
    for (const auto& l : links_) {
        vertex(l.a);
        vertex(l.b);
    }
    adjacency_.resize(vertex_ids_.size());
    for (std::size_t i = 0; i < links_.size(); ++i) {
        std::size_t a = ids.at(links_[i].a);
        std::size_t b = ids.at(links_[i].b);
        adjacency_[a].push_back({b, i, true});
        adjacency_[b].push_back({a, i, false});
    }
    for (auto& edges : adjacency_) {
        std::sort(edges.begin(), edges.end(), [&](const Edge& x, const Edge& y) {
            if (vertex_ids_[x.to] != vertex_ids_[y.to]) return vertex_ids_[x.to] < vertex_ids_[y.to];
            return x.link < y.link;
        });
    }

    ap_routes_.resize(ap_count_ * node_count_);
    for (std::size_t m = 0; m < ap_count_; ++m) {
        auto from_ap = bfs_routes(ap_vertex_[m]);
        for (std::size_t j = 0; j < node_count_; ++j)
            ap_routes_[m * node_count_ + j] = from_ap[node_vertex_[j]];
        const auto& colocated = topology.access_points[m].colocated_fog;
        if (!colocated.empty()) {
            if (auto j = topology.find_node(colocated)) {
                Route zero;
                zero.reachable = true;
                ap_routes_[m * node_count_ + *j] = zero;
            }
        }
    }

    auto clouds = topology.cloud_nodes();
    cloud_routes_.resize(node_count_);
    nearest_cloud_.assign(node_count_, no_index);
    for (std::size_t j = 0; j < node_count_; ++j) {
        if (topology.nodes[j].is_cloud()) {
            Route self;
            self.reachable = true;
            cloud_routes_[j] = self;
            nearest_cloud_[j] = j;
            continue;
        }
        auto from_host = bfs_routes(node_vertex_[j]);
        for (NodeIndex c : clouds) {
            const Route& r = from_host[node_vertex_[c]];
            if (!r.reachable) continue;
            if (nearest_cloud_[j] == no_index || r.hops < cloud_routes_[j].hops) {
                cloud_routes_[j] = r;
                nearest_cloud_[j] = c;
            }
        }
    }
}

std::vector<Route> Network::bfs_routes(std::size_t source) const {
    std::vector<Route> routes(vertex_ids_.size());
    std::vector<bool> seen(vertex_ids_.size(), false);
    std::deque<std::size_t> queue;
    routes[source].reachable = true;
    seen[source] = true;
    queue.push_back(source);
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (const Edge& e : adjacency_[v]) {
            if (seen[e.to]) continue;
            seen[e.to] = true;
            const Link& link = links_[e.link];
            Route r = routes[v];
            r.hops += 1;
            r.delay += link.delay;
            r.unit_cost += link.unit_cost;
            double toward = e.forward ? link.uplink_rate : link.downlink_rate;
            double back = e.forward ? link.downlink_rate : link.uplink_rate;
            r.request_rate = std::min(r.request_rate, toward);
            r.response_rate = std::min(r.response_rate, back);
            routes[e.to] = r;
            queue.push_back(e.to);
        }
    }
    return routes;
}

} // namespace mera
