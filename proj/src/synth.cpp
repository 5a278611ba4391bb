#include "mera/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mera/rng.hpp"
#include "mera/units.hpp"

namespace mera {

const char* to_string(Regime r) {
    return r == Regime::default_routes ? "default" : "optimized";
}

std::optional<Regime> parse_regime(const std::string& s) {
    if (s == "default") return Regime::default_routes;
    if (s == "optimized") return Regime::optimized_routes;
    return std::nullopt;
}

SynthOptions regime_defaults(Regime regime, std::uint64_t seed) {
    SynthOptions o;
    o.seed = seed;
    o.regime = regime;
    if (regime == Regime::default_routes) {
        o.popularity_skew = 1.3;
        o.mean_presence_rounds = 8.0;
        o.speed_min = 3.0;
        o.speed_max = 8.0;
        o.park_min = 120.0;
        o.park_max = 900.0;
    } else {
        o.popularity_skew = 0.0;
        o.mean_presence_rounds = 3.0;
        o.speed_min = 8.0;
        o.speed_max = 16.0;
        o.park_min = 0.0;
        o.park_max = 30.0;
    }
    return o;
}

double chord_length(double x0, double y0, double x1, double y1, double cx, double cy, double radius) {
    const double dx = x1 - x0, dy = y1 - y0;
    const double len2 = dx * dx + dy * dy;
    const double fx = x0 - cx, fy = y0 - cy;
    if (len2 <= 0.0) return 0.0;
    // |f + t d|^2 = r^2
    const double b = 2.0 * (fx * dx + fy * dy);
    const double c = fx * fx + fy * fy - radius * radius;
    const double disc = b * b - 4.0 * len2 * c;
    if (disc <= 0.0) return 0.0;
    const double sq = std::sqrt(disc);
    double t1 = (-b - sq) / (2.0 * len2);
    double t2 = (-b + sq) / (2.0 * len2);
    t1 = std::max(t1, 0.0);
    t2 = std::min(t2, 1.0);
    if (t2 <= t1) return 0.0;
    return (t2 - t1) * std::sqrt(len2);
}

namespace {

struct Machine {
    double memory_gb, gflops, storage_gb, idle_w, max_w;
};

// Server models the fog tier draws from.
constexpr std::array<Machine, 5> fog_machines{{
    {192, 864.0, 120, 52.4, 343},
    {196, 806.4, 292, 131, 432},
    {192, 1523.2, 480, 48, 385},
    {192, 1612.8, 240, 64.2, 435},
    {384, 1792.0, 480, 44.6, 502},
}};
// Cloud reference machine: 112000 MIPS over 10 cores, i.e. 112 GFLOPS on
// the fog tier's scale.
constexpr Machine cloud_machine{768, 112.0, 500, 57, 115};
constexpr int cloud_cores = 10;

constexpr double area_w = 2101.98;
constexpr double area_h = 3313.97;

// Transfer energy per bit, download/upload, nJ.
constexpr double bs_down_nj = 82820, bs_up_nj = 12400;
constexpr double edge_router_nj = 37, core_router_nj = 12.6, switch_nj = 31.7;

std::string pad(std::size_t v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

struct Vehicle {
    std::string id;
    bool present = false;
    double x = 0, y = 0;
    double tx = 0, ty = 0;  // destination
    double speed = 0;
    double park_left = 0;   // s still parked at the current spot
};

// Relative share of the vehicle pool in the area per round, a smooth
// rush-hour hump.
double traffic_share(std::size_t round, std::size_t rounds) {
    double t = rounds > 1 ? static_cast<double>(round) / (rounds - 1) : 0.0;
    return 0.55 + 0.25 * std::sin(std::numbers::pi * t);
}

// Mean IoT intensity of a 15-minute profile over two days (96 per day),
// with a night trough and an evening peak.
double profile_intensity(std::size_t p, Rng& rng) {
    const double day = static_cast<double>(p % 96) / 96.0;
    double v = 1.0 + 0.45 * std::sin(2.0 * std::numbers::pi * (day - 0.3));
    v *= rng.uniform(0.93, 1.07);
    return std::max(v, 0.2);
}

} // namespace

Scenario synthesize(const SynthOptions& o) {
    Scenario s;
    s.name = std::string("synthetic-") + to_string(o.regime);
    s.seed = o.seed;
    s.settings.slot_length = o.slot_length;
    s.settings.rounds_per_profile = 3;

    // The topology is shared by both regimes; only mobility depends on it.
    Rng topo_rng(mix_seed({o.seed, 0x70b0ULL}));
    Rng mob_rng(mix_seed({o.seed, 0x30b1ULL, static_cast<std::uint64_t>(o.regime)}));
    Rng svc_rng(mix_seed({o.seed, 0x5e7cULL}));
    Rng iot_rng(mix_seed({o.seed, 0x107ULL}));

    PriceBook& pb = s.prices;
    pb.nonrenewable_energy = 0.905;
    pb.renewable_energy = 294.0 * 1e-3 * s.settings.eur_to_usd;
    pb.carbon = 17.27 * 1e-3 * s.settings.eur_to_usd;
    pb.emission_rate = 0.380;

    Topology& t = s.topology;
    const double ram_price = 21e-10 / 128.0 / (units::mib * 1e-3);
    auto storage_price = [&] { return topo_rng.uniform(0.021, 0.023) / (units::gib * units::seconds_per_month); };

    // Access points on a jittered grid.
    const std::size_t cols = 3;
    const std::size_t rows = (o.access_points + cols - 1) / cols;
    std::vector<double> ap_renewable;
    for (std::size_t k = 0; k < o.access_points; ++k) {
        AccessPoint ap;
        ap.id = "ap-" + pad(k, 2);
        const double cx = (k % cols + 0.5) * area_w / cols;
        const double cy = (k / cols + 0.5) * area_h / rows;
        ap.x = cx + topo_rng.uniform(-80.0, 80.0);
        ap.y = cy + topo_rng.uniform(-80.0, 80.0);
        ap.coverage_radius = topo_rng.uniform(420.0, 520.0);
        ap.renewable_ratio = topo_rng.beta(0.6, 0.4);
        ap.transfer_energy = {units::nj_per_bit_to_j_per_byte(bs_up_nj), units::nj_per_bit_to_j_per_byte(bs_down_nj)};
        ap.uplink_rate = 0.012 * units::gbps;
        ap.downlink_rate = 0.072 * units::gbps;
        ap.radio_delay = topo_rng.uniform(0.5, 1.5) * units::millisecond;
        ap.colocated_fog = "fog-e" + pad(k, 2);
        ap_renewable.push_back(ap.renewable_ratio);
        t.access_points.push_back(ap);
    }

    auto fog_node = [&](const std::string& id, const std::string& router, double renewable, double cpu_price) {
        const Machine& m = fog_machines[topo_rng.index(fog_machines.size())];
        Node n;
        n.id = id;
        n.kind = NodeKind::fog;
        n.unit_count = 3 + static_cast<int>(topo_rng.index(6));
        n.unit_rate = m.gflops * o.mips_per_gflops / n.unit_count;
        n.cpu_capacity = n.unit_count * n.unit_rate;
        n.ram_capacity = m.memory_gb * units::gib;
        n.storage_capacity = m.storage_gb * units::gib;
        n.idle_power = m.idle_w;
        n.max_power = m.max_w;
        n.renewable_ratio = renewable;
        n.attached_router = router;
        t.nodes.push_back(n);
        pb.node.push_back({cpu_price, ram_price, storage_price()});
    };

    // Edge fogs share the site (and energy mix) of their access point.
    for (std::size_t k = 0; k < o.access_points; ++k)
        fog_node("fog-e" + pad(k, 2), "er-" + pad(k, 2), ap_renewable[k], 6e-7);
    for (std::size_t c = 0; c < o.core_fogs; ++c)
        fog_node("fog-c" + std::to_string(c), "cr-" + std::to_string(c), topo_rng.beta(0.6, 0.4), 2e-7);

    {
        Node c;
        c.id = "cloud-0";
        c.kind = NodeKind::cloud;
        c.unit_count = cloud_cores;
        c.unit_rate = cloud_machine.gflops * o.mips_per_gflops / cloud_cores;
        c.cpu_capacity = c.unit_count * c.unit_rate;
        c.ram_capacity = cloud_machine.memory_gb * units::gib;
        c.storage_capacity = cloud_machine.storage_gb * units::gib;
        c.idle_power = cloud_machine.idle_w;
        c.max_power = cloud_machine.max_w;
        c.renewable_ratio = 0.85;
        c.pue = 1.2;
        c.unbounded = true;
        c.attached_router = "sw-cloud";
        t.nodes.push_back(c);
        pb.node.push_back({2e-7, ram_price, storage_price()});
    }

    auto router = [&](const std::string& id, RouterKind kind, double nj) {
        RouterProfile r;
        r.id = id;
        r.kind = kind;
        r.transfer_energy = {units::nj_per_bit_to_j_per_byte(nj), units::nj_per_bit_to_j_per_byte(nj)};
        t.routers.push_back(r);
    };
    for (std::size_t k = 0; k < o.access_points; ++k) router("er-" + pad(k, 2), RouterKind::edge_router, edge_router_nj);
    for (std::size_t c = 0; c < o.core_fogs; ++c) router("cr-" + std::to_string(c), RouterKind::core_router, core_router_nj);
    router("sw-cloud", RouterKind::ethernet_switch, switch_nj);

    auto link = [&](const std::string& a, const std::string& b, LinkTier tier) {
        Link l;
        l.a = a;
        l.b = b;
        l.tier = tier;
        switch (tier) {
        case LinkTier::intra_edge:
            l.delay = topo_rng.uniform(0.4, 0.8) * units::millisecond;
            l.uplink_rate = 1.0 * units::gbps;
            l.downlink_rate = 10.0 * units::gbps;
            l.unit_cost = topo_rng.uniform(0.01, 0.03) / units::gib;
            break;
        case LinkTier::core:
            l.delay = topo_rng.uniform(0.8, 1.5) * units::millisecond;
            l.uplink_rate = 10.0 * units::gbps;
            l.downlink_rate = 100.0 * units::gbps;
            l.unit_cost = topo_rng.uniform(0.03, 0.06) / units::gib;
            break;
        case LinkTier::cloud:
            l.delay = topo_rng.uniform(15.0, 35.0) * units::millisecond;
            l.uplink_rate = 100.0 * units::gbps;
            l.downlink_rate = 100.0 * units::gbps;
            l.unit_cost = topo_rng.uniform(0.06, 0.09) / units::gib;
            break;
        }
        t.links.push_back(l);
    };
    // AP <-> edge router <-> core router ring <-> cloud switch.
    for (std::size_t k = 0; k < o.access_points; ++k) {
        const std::string er = "er-" + pad(k, 2);
        link(t.access_points[k].id, er, LinkTier::intra_edge);
        link(er, "fog-e" + pad(k, 2), LinkTier::intra_edge);
        link(er, "cr-" + std::to_string(k % o.core_fogs), LinkTier::core);
    }
    for (std::size_t c = 0; c < o.core_fogs; ++c) {
        const std::string cr = "cr-" + std::to_string(c);
        link(cr, "fog-c" + std::to_string(c), LinkTier::core);
        if (o.core_fogs > 1) link(cr, "cr-" + std::to_string((c + 1) % o.core_fogs), LinkTier::core);
    }
    link("cr-0", "sw-cloud", LinkTier::cloud);
    link("sw-cloud", "cloud-0", LinkTier::intra_edge);
    s.settings.fallback_ap = t.access_points.empty() ? "" : t.access_points.front().id;

    // ---------------------------------------------------------- services
    std::vector<double> multiplier;
    for (std::size_t v = 0; v < o.vehicles; ++v) {
        Service sv;
        sv.vehicle = "veh-" + pad(v, 3);
        sv.id = "svc-" + pad(v, 3);
        sv.cpu_demand = svc_rng.uniform(50.0, 200.0);
        sv.ram_demand = svc_rng.uniform(2.0, 400.0) * units::mib;
        sv.storage_demand = svc_rng.uniform(50.0, 500.0) * units::mib;
        sv.request_size = svc_rng.uniform(10.0, 26.0) * units::kib;
        sv.response_size = svc_rng.uniform(10.0, 20.0);
        sv.deadline = svc_rng.uniform(o.deadline_min, o.deadline_max);
        sv.qos_level = svc_rng.uniform(0.90, 0.995);
        sv.monthly_price = 0.0058 * units::hours_per_month;
        t.vehicles.push_back(sv.vehicle);
        s.services.push_back(sv);
        multiplier.push_back(svc_rng.uniform(0.5, 1.5));
    }

    s.iot_profiles.resize(o.profiles);
    for (std::size_t p = 0; p < o.profiles; ++p) {
        const double intensity = profile_intensity(p, iot_rng);
        for (std::size_t v = 0; v < o.vehicles; ++v) {
            double z = o.mean_arrival_rate * intensity * multiplier[v] * iot_rng.uniform(0.9, 1.1);
            // Rounded so the CSV form reads back exactly.
            s.iot_profiles[p][s.services[v].id] = std::round(z * 1e4) / 1e4;
        }
    }

    // ---------------------------------------------------------- mobility
    const bool skewed = o.regime == Regime::default_routes;
    const double leave_prob = 1.0 / o.mean_presence_rounds;
    // Popularity of access points as trip destinations / origins.
    std::vector<double> weight(o.access_points, 1.0);
    if (o.popularity_skew > 0.0) {
        std::vector<std::size_t> rank(o.access_points);
        for (std::size_t k = 0; k < rank.size(); ++k) rank[k] = k;
        mob_rng.shuffle(rank);
        for (std::size_t k = 0; k < rank.size(); ++k) weight[rank[k]] = 1.0 / std::pow(k + 1.0, o.popularity_skew);
    }
    double weight_sum = 0.0;
    for (double w : weight) weight_sum += w;
    auto pick_ap = [&]() {
        double u = mob_rng.uniform(0.0, weight_sum);
        for (std::size_t k = 0; k < weight.size(); ++k) {
            if (u < weight[k]) return k;
            u -= weight[k];
        }
        return weight.size() - 1;
    };
    auto near_ap = [&](std::size_t k, double spread) {
        const AccessPoint& ap = t.access_points[k];
        double r = ap.coverage_radius * spread * std::sqrt(mob_rng.uniform(0.0, 1.0));
        double a = mob_rng.uniform(0.0, 2.0 * std::numbers::pi);
        return std::pair{std::clamp(ap.x + r * std::cos(a), 0.0, area_w), std::clamp(ap.y + r * std::sin(a), 0.0, area_h)};
    };
    auto new_destination = [&](Vehicle& v) {
        auto [x, y] = near_ap(pick_ap(), skewed ? 0.6 : 1.0);
        v.tx = x;
        v.ty = y;
    };

    std::vector<Vehicle> fleet(o.vehicles);
    for (std::size_t v = 0; v < o.vehicles; ++v) fleet[v].id = s.services[v].vehicle;

    s.traces.resize(o.rounds);
    for (std::size_t r = 0; r < o.rounds; ++r) {
        // Departures, then arrivals up to the traffic level of this round.
        for (auto& v : fleet)
            if (v.present && mob_rng.uniform(0.0, 1.0) < leave_prob) v.present = false;
        const auto target = static_cast<std::size_t>(std::lround(traffic_share(r, o.rounds) * o.vehicles));
        std::vector<std::size_t> present, absent;
        for (std::size_t v = 0; v < fleet.size(); ++v) (fleet[v].present ? present : absent).push_back(v);
        mob_rng.shuffle(present);
        mob_rng.shuffle(absent);
        while (present.size() > target) {
            fleet[present.back()].present = false;
            present.pop_back();
        }
        for (std::size_t k = 0; present.size() < target && k < absent.size(); ++k) {
            Vehicle& v = fleet[absent[k]];
            v.present = true;
            auto [x, y] = near_ap(pick_ap(), skewed ? 0.8 : 1.2);
            v.x = x;
            v.y = y;
            v.speed = mob_rng.uniform(o.speed_min, o.speed_max);
            v.park_left = 0.0;
            new_destination(v);
            present.push_back(absent[k]);
        }
        std::sort(present.begin(), present.end());

        for (std::size_t idx : present) {
            Vehicle& v = fleet[idx];
            MobilityTrace tr;
            tr.vehicle = v.id;
            tr.speed = v.speed;
            // Alternate between driving to the destination and parking there
            // until the slot is used up. Coverage is accumulated as the
            // distance the vehicle would have covered at its speed.
            double time_left = o.slot_length;
            std::vector<double> covered(o.access_points, 0.0);
            for (int leg = 0; leg < 8 && time_left > 1e-9; ++leg) {
                if (v.park_left > 0.0) {
                    const double dwell = std::min(v.park_left, time_left);
                    for (std::size_t k = 0; k < o.access_points; ++k) {
                        const AccessPoint& ap = t.access_points[k];
                        if (std::hypot(v.x - ap.x, v.y - ap.y) <= ap.coverage_radius) covered[k] += v.speed * dwell;
                    }
                    v.park_left -= dwell;
                    time_left -= dwell;
                    continue;
                }
                const double dx = v.tx - v.x, dy = v.ty - v.y;
                const double dist = std::hypot(dx, dy);
                const double step = std::min(dist, v.speed * time_left);
                const double nx = dist > 0 ? v.x + dx / dist * step : v.x;
                const double ny = dist > 0 ? v.y + dy / dist * step : v.y;
                for (std::size_t k = 0; k < o.access_points; ++k) {
                    const AccessPoint& ap = t.access_points[k];
                    covered[k] += chord_length(v.x, v.y, nx, ny, ap.x, ap.y, ap.coverage_radius);
                }
                v.x = nx;
                v.y = ny;
                time_left -= step / v.speed;
                if (step >= dist) {
                    v.park_left = mob_rng.uniform(o.park_min, o.park_max);
                    new_destination(v);
                }
            }
            for (std::size_t k = 0; k < o.access_points; ++k) {
                if (covered[k] <= 0.0) continue;
                CoverageSegment seg;
                seg.ap = t.access_points[k].id;
                seg.coverage_length = std::round(covered[k] * 100.0) / 100.0;
                seg.registration_time = std::round(mob_rng.uniform(0.0, 2.0) * 1000.0) / 1000.0;
                seg.wait_time = std::round(mob_rng.uniform(0.0, 1.0) * 1000.0) / 1000.0;
                tr.segments.push_back(seg);
            }
            tr.speed = std::round(v.speed * 1000.0) / 1000.0;
            s.traces[r].push_back(std::move(tr));
        }
    }

    for (auto& sv : s.services) sv.violation_unit_cost = resolve_violation_cost(sv, s.settings);
    return s;
}

} // namespace mera
