#include "mera/validate.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace mera {

namespace {

class Checker {
public:
    explicit Checker(std::vector<Diagnostic>& out) : out_(out) {}

    void fail(std::string where, std::string what) {
        out_.push_back({std::move(where), std::move(what)});
    }
    void positive(double v, const std::string& where) {
        if (!(v > 0.0) || !std::isfinite(v)) fail(where, "must be positive and finite");
    }
    void non_negative(double v, const std::string& where) {
        if (!(v >= 0.0) || std::isnan(v)) fail(where, "must be non-negative");
    }
    void fraction(double v, const std::string& where) {
        if (!(v >= 0.0 && v <= 1.0)) fail(where, "must lie in [0,1]");
    }

private:
    std::vector<Diagnostic>& out_;
};

std::string at(const char* list, std::size_t i, const char* field) {
    std::ostringstream os;
    os << list << '[' << i << "]." << field;
    return os.str();
}

} // namespace

std::vector<Diagnostic> check_scenario(const Scenario& s) {
    std::vector<Diagnostic> out;
    Checker c(out);
    const Topology& topo = s.topology;

    std::set<std::string> entity_ids;
    std::set<std::string> router_ids;
    for (const auto& r : topo.routers) router_ids.insert(r.id);

    auto unique_id = [&](const std::string& id, const std::string& where) {
        if (id.empty()) {
            c.fail(where, "empty id");
        } else if (!entity_ids.insert(id).second) {
            c.fail(where, "duplicate id '" + id + "'");
        }
    };

    bool has_cloud = false;
    for (std::size_t i = 0; i < topo.nodes.size(); ++i) {
        const Node& n = topo.nodes[i];
        unique_id(n.id, at("nodes", i, "id"));
        has_cloud = has_cloud || n.is_cloud();
        c.positive(n.cpu_capacity, at("nodes", i, "cpu_capacity"));
        c.positive(n.ram_capacity, at("nodes", i, "ram_capacity"));
        c.positive(n.storage_capacity, at("nodes", i, "storage_capacity"));
        if (n.unit_count < 1) c.fail(at("nodes", i, "unit_count"), "must be at least 1");
        c.positive(n.unit_rate, at("nodes", i, "unit_rate"));
        if (n.unit_count >= 1 && n.unit_rate > 0.0 && n.cpu_capacity > 0.0 &&
            std::abs(n.unit_count * n.unit_rate - n.cpu_capacity) > 1e-9 * n.cpu_capacity)
            c.fail(at("nodes", i, "cpu_capacity"), "capacity inconsistency: unit_count * unit_rate != cpu_capacity");
        c.fraction(n.renewable_ratio, at("nodes", i, "renewable_ratio"));
        if (!(n.idle_power >= 0.0)) c.fail(at("nodes", i, "idle_power"), "must be non-negative");
        if (!(n.max_power >= n.idle_power)) c.fail(at("nodes", i, "max_power"), "must be at least idle_power");
        if (n.is_cloud()) {
            if (!(n.pue >= 1.0)) c.fail(at("nodes", i, "pue"), "cloud PUE must be >= 1");
        } else {
            if (n.pue != 1.0) c.fail(at("nodes", i, "pue"), "fog PUE must be 1");
            if (n.unbounded) c.fail(at("nodes", i, "unbounded"), "only cloud nodes may be unbounded");
        }
        if (!n.attached_router.empty() && !router_ids.count(n.attached_router))
            c.fail(at("nodes", i, "attached_router"), "dangling reference '" + n.attached_router + "'");
    }
    if (!has_cloud) c.fail("nodes", "scenario needs at least one cloud node");

    for (std::size_t i = 0; i < topo.access_points.size(); ++i) {
        const AccessPoint& ap = topo.access_points[i];
        unique_id(ap.id, at("access_points", i, "id"));
        c.positive(ap.coverage_radius, at("access_points", i, "coverage_radius"));
        c.fraction(ap.renewable_ratio, at("access_points", i, "renewable_ratio"));
        c.non_negative(ap.transfer_energy.upload, at("access_points", i, "transfer_energy.upload"));
        c.non_negative(ap.transfer_energy.download, at("access_points", i, "transfer_energy.download"));
        if (!(ap.uplink_rate > 0.0)) c.fail(at("access_points", i, "uplink_rate"), "must be positive");
        if (!(ap.downlink_rate > 0.0)) c.fail(at("access_points", i, "downlink_rate"), "must be positive");
        c.non_negative(ap.radio_delay, at("access_points", i, "radio_delay"));
        if (!ap.colocated_fog.empty()) {
            auto j = topo.find_node(ap.colocated_fog);
            if (!j) c.fail(at("access_points", i, "colocated_fog"), "dangling reference '" + ap.colocated_fog + "'");
            else if (topo.nodes[*j].is_cloud())
                c.fail(at("access_points", i, "colocated_fog"), "colocated node must be a fog node");
        }
    }

    for (std::size_t i = 0; i < topo.routers.size(); ++i) {
        const RouterProfile& r = topo.routers[i];
        unique_id(r.id, at("routers", i, "id"));
        c.non_negative(r.transfer_energy.upload, at("routers", i, "transfer_energy.upload"));
        c.non_negative(r.transfer_energy.download, at("routers", i, "transfer_energy.download"));
    }

    for (std::size_t i = 0; i < topo.links.size(); ++i) {
        const Link& l = topo.links[i];
        if (!entity_ids.count(l.a)) c.fail(at("links", i, "a"), "dangling reference '" + l.a + "'");
        if (!entity_ids.count(l.b)) c.fail(at("links", i, "b"), "dangling reference '" + l.b + "'");
        c.non_negative(l.delay, at("links", i, "delay"));
        if (!(l.uplink_rate > 0.0)) c.fail(at("links", i, "uplink_rate"), "must be positive");
        if (!(l.downlink_rate > 0.0)) c.fail(at("links", i, "downlink_rate"), "must be positive");
        c.non_negative(l.unit_cost, at("links", i, "unit_cost"));
    }

    std::set<std::string> vehicles;
    for (std::size_t i = 0; i < topo.vehicles.size(); ++i) {
        if (!vehicles.insert(topo.vehicles[i]).second)
            c.fail(at("vehicles", i, "id"), "duplicate vehicle '" + topo.vehicles[i] + "'");
    }

    const PriceBook& p = s.prices;
    if (p.node.size() != topo.nodes.size()) {
        c.fail("prices.node", "expected one price entry per node");
    } else {
        for (std::size_t i = 0; i < p.node.size(); ++i) {
            c.non_negative(p.node[i].cpu, at("prices.node", i, "cpu"));
            c.non_negative(p.node[i].ram, at("prices.node", i, "ram"));
            c.non_negative(p.node[i].storage, at("prices.node", i, "storage"));
        }
    }
    c.non_negative(p.nonrenewable_energy, "prices.nonrenewable_energy");
    c.non_negative(p.renewable_energy, "prices.renewable_energy");
    c.non_negative(p.carbon, "prices.carbon");
    c.non_negative(p.emission_rate, "prices.emission_rate");

    std::set<std::string> service_ids;
    for (std::size_t i = 0; i < s.services.size(); ++i) {
        const Service& sv = s.services[i];
        if (sv.id.empty()) c.fail(at("services", i, "id"), "empty id");
        else if (!service_ids.insert(sv.id).second) c.fail(at("services", i, "id"), "duplicate id '" + sv.id + "'");
        if (!vehicles.count(sv.vehicle))
            c.fail(at("services", i, "vehicle"), "dangling reference to unknown vehicle '" + sv.vehicle + "'");
        c.positive(sv.cpu_demand, at("services", i, "cpu_demand"));
        c.positive(sv.ram_demand, at("services", i, "ram_demand"));
        c.positive(sv.storage_demand, at("services", i, "storage_demand"));
        c.positive(sv.request_size, at("services", i, "request_size"));
        c.positive(sv.response_size, at("services", i, "response_size"));
        c.non_negative(sv.arrival_rate, at("services", i, "arrival_rate"));
        c.positive(sv.deadline, at("services", i, "deadline"));
        if (!(sv.qos_level > 0.0 && sv.qos_level < 1.0))
            c.fail(at("services", i, "qos_level"), "must lie in (0,1)");
        c.non_negative(sv.monthly_price, at("services", i, "monthly_price"));
    }

    for (std::size_t r = 0; r < s.traces.size(); ++r) {
        for (std::size_t v = 0; v < s.traces[r].size(); ++v) {
            const MobilityTrace& t = s.traces[r][v];
            std::string base = "traces[" + std::to_string(r) + "][" + std::to_string(v) + "]";
            if (!vehicles.count(t.vehicle))
                c.fail(base + ".vehicle", "dangling reference to unknown vehicle '" + t.vehicle + "'");
            c.positive(t.speed, base + ".speed");
            for (std::size_t k = 0; k < t.segments.size(); ++k) {
                const CoverageSegment& seg = t.segments[k];
                std::string sb = base + ".segments[" + std::to_string(k) + "]";
                if (!topo.find_ap(seg.ap)) c.fail(sb + ".ap", "dangling reference '" + seg.ap + "'");
                c.non_negative(seg.coverage_length, sb + ".coverage_length");
                c.non_negative(seg.registration_time, sb + ".registration_time");
                c.non_negative(seg.wait_time, sb + ".wait_time");
            }
        }
    }

    for (std::size_t q = 0; q < s.iot_profiles.size(); ++q) {
        // Sorted so the diagnostic order does not depend on hashing.
        std::set<std::string> keys;
        for (const auto& [id, rate] : s.iot_profiles[q]) keys.insert(id);
        for (const auto& id : keys) {
            std::string base = "iot_profiles[" + std::to_string(q) + "][" + id + "]";
            if (!service_ids.count(id)) c.fail(base, "dangling reference to unknown service");
            c.non_negative(s.iot_profiles[q].at(id), base);
        }
    }

    const ScenarioSettings& st = s.settings;
    if (!(st.slot_length > 0.0)) c.fail("settings.slot_length", "slot length must be positive");
    if (!(st.utilization_cap > 0.0 && st.utilization_cap <= 1.0))
        c.fail("settings.utilization_cap", "must lie in (0,1]");
    c.non_negative(st.startup_delay, "settings.startup_delay");
    c.positive(st.eur_to_usd, "settings.eur_to_usd");
    c.non_negative(st.credit_basis_requests, "settings.credit_basis_requests");
    if (st.rounds_per_profile < 1) c.fail("settings.rounds_per_profile", "must be at least 1");
    if (!st.fallback_ap.empty() && !topo.find_ap(st.fallback_ap))
        c.fail("settings.fallback_ap", "dangling reference '" + st.fallback_ap + "'");

    // Routing: every access point must reach some cloud.
    if (out.empty()) {
        Network net(topo);
        auto clouds = topo.cloud_nodes();
        for (std::size_t m = 0; m < topo.access_points.size(); ++m) {
            bool ok = false;
            for (NodeIndex cl : clouds) ok = ok || net.ap_to_host(m, cl).reachable;
            if (!ok) c.fail(at("access_points", m, "id"), "no path to any cloud node");
        }
    }
    return out;
}

ValidationResult validate_scenario(Scenario scenario) {
    auto diagnostics = check_scenario(scenario);
    if (!diagnostics.empty()) return diagnostics;
    for (auto& sv : scenario.services)
        sv.violation_unit_cost = resolve_violation_cost(sv, scenario.settings);
    ValidatedScenario v;
    v.network = Network(scenario.topology);
    v.scenario = std::move(scenario);
    return v;
}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics) {
    std::ostringstream os;
    for (const auto& d : diagnostics) os << d.where << ": " << d.what << '\n';
    return os.str();
}

} // namespace mera
