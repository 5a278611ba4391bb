#include "mera/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mera/units.hpp"

namespace mera {

using nlohmann::json;

ParseError::ParseError(std::string file, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

ScenarioFiles ScenarioFiles::in(const std::filesystem::path& dir) {
    return {dir / "topology.json", dir / "services.csv", dir / "iot_profile.csv", dir / "mobility.csv"};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------- topology

namespace {

// Unit conventions of the topology document.
constexpr double ram_price_unit = units::mib * 1e-3;              // $ per MiB per ms
constexpr double storage_price_unit = units::gib * units::seconds_per_month; // $ per GiB per month
constexpr double link_cost_unit = units::gib;                     // $ per GiB

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

struct JsonReader {
    const std::string& name;

    [[noreturn]] void fail(const std::string& where, const std::string& what) const {
        throw ParseError(name, 0, 0, where + ": " + what);
    }
    const json& field(const json& obj, const char* key, const std::string& where) const {
        if (!obj.is_object()) fail(where, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(where, std::string("missing field '") + key + "'");
        return *it;
    }
    double number(const json& obj, const char* key, const std::string& where) const {
        const json& v = field(obj, key, where);
        if (!v.is_number()) fail(where + "." + key, "expected a number");
        return v.get<double>();
    }
    double number_or(const json& obj, const char* key, double fallback, const std::string& where) const {
        if (!obj.contains(key)) return fallback;
        return number(obj, key, where);
    }
    std::string text(const json& obj, const char* key, const std::string& where) const {
        const json& v = field(obj, key, where);
        if (!v.is_string()) fail(where + "." + key, "expected a string");
        return v.get<std::string>();
    }
    std::string text_or(const json& obj, const char* key, const std::string& where) const {
        if (!obj.contains(key) || obj.at(key).is_null()) return {};
        return text(obj, key, where);
    }
    bool boolean_or(const json& obj, const char* key, bool fallback, const std::string& where) const {
        if (!obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_boolean()) fail(where + "." + key, "expected true/false");
        return v.get<bool>();
    }
    const json& array(const json& obj, const char* key, const std::string& where) const {
        const json& v = field(obj, key, where);
        if (!v.is_array()) fail(where + "." + key, "expected an array");
        return v;
    }
};

} // namespace

void parse_topology(const std::string& text, const std::string& name, Scenario& out) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(name, line, col, "malformed JSON");
    }
    JsonReader r{name};
    if (!doc.is_object()) r.fail("document", "expected an object");
    int version = static_cast<int>(r.number(doc, "schema_version", "document"));
    if (version != schema_version)
        throw ParseError(name, 0, 0, "schema version " + std::to_string(version) + " is not supported (expected " +
                                         std::to_string(schema_version) + ")");
    out.name = doc.value("name", std::string{});
    out.seed = doc.value("seed", std::uint64_t{0});

    ScenarioSettings& st = out.settings;
    if (doc.contains("settings")) {
        const json& s = doc.at("settings");
        st.slot_length = r.number_or(s, "slot_length_s", st.slot_length, "settings");
        st.utilization_cap = r.number_or(s, "utilization_cap", st.utilization_cap, "settings");
        st.startup_delay = r.number_or(s, "startup_delay_s", st.startup_delay, "settings");
        st.eur_to_usd = r.number_or(s, "eur_to_usd", st.eur_to_usd, "settings");
        st.credit_basis_requests = r.number_or(s, "credit_basis_requests", st.credit_basis_requests, "settings");
        st.rounds_per_profile = static_cast<int>(r.number_or(s, "rounds_per_profile", st.rounds_per_profile, "settings"));
        st.fallback_ap = r.text_or(s, "fallback_ap", "settings");
    }

    const json& prices = r.field(doc, "prices", "document");
    PriceBook& pb = out.prices;
    pb.nonrenewable_energy = r.number(prices, "nonrenewable_usd_per_kwh", "prices");
    pb.renewable_energy = r.number(prices, "renewable_eur_per_mwh", "prices") * 1e-3 * st.eur_to_usd;
    pb.carbon = r.number(prices, "carbon_eur_per_tonne", "prices") * 1e-3 * st.eur_to_usd;
    pb.emission_rate = r.number(prices, "emission_kg_per_kwh", "prices");

    Topology& topo = out.topology;
    const json& nodes = r.array(doc, "nodes", "document");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const json& n = nodes[i];
        std::string where = "nodes[" + std::to_string(i) + "]";
        Node node;
        node.id = r.text(n, "id", where);
        auto kind = parse_node_kind(r.text(n, "kind", where));
        if (!kind) r.fail(where + ".kind", "expected 'fog' or 'cloud'");
        node.kind = *kind;
        node.cpu_capacity = r.number(n, "cpu_mips", where);
        node.ram_capacity = r.number(n, "ram_bytes", where);
        node.storage_capacity = r.number(n, "storage_bytes", where);
        node.unit_count = static_cast<int>(r.number(n, "unit_count", where));
        node.unit_rate = r.number(n, "unit_mips", where);
        node.idle_power = r.number(n, "idle_w", where);
        node.max_power = r.number(n, "max_w", where);
        node.renewable_ratio = r.number(n, "renewable_ratio", where);
        node.pue = r.number_or(n, "pue", 1.0, where);
        node.active = r.boolean_or(n, "active", true, where);
        node.unbounded = r.boolean_or(n, "unbounded", false, where);
        node.attached_router = r.text_or(n, "attached_router", where);
        topo.nodes.push_back(node);
        NodePrices np;
        np.cpu = r.number(n, "cpu_usd_per_mi", where);
        np.ram = r.number(n, "ram_usd_per_mib_ms", where) / ram_price_unit;
        np.storage = r.number(n, "storage_usd_per_gib_month", where) / storage_price_unit;
        pb.node.push_back(np);
    }

    const json& aps = r.array(doc, "access_points", "document");
    for (std::size_t i = 0; i < aps.size(); ++i) {
        const json& a = aps[i];
        std::string where = "access_points[" + std::to_string(i) + "]";
        AccessPoint ap;
        ap.id = r.text(a, "id", where);
        ap.x = r.number(a, "x_m", where);
        ap.y = r.number(a, "y_m", where);
        ap.coverage_radius = r.number(a, "coverage_m", where);
        ap.renewable_ratio = r.number(a, "renewable_ratio", where);
        ap.transfer_energy.upload = units::nj_per_bit_to_j_per_byte(r.number(a, "upload_nj_per_bit", where));
        ap.transfer_energy.download = units::nj_per_bit_to_j_per_byte(r.number(a, "download_nj_per_bit", where));
        ap.uplink_rate = r.number(a, "uplink_bps", where);
        ap.downlink_rate = r.number(a, "downlink_bps", where);
        ap.radio_delay = r.number_or(a, "radio_delay_s", 1e-3, where);
        ap.colocated_fog = r.text_or(a, "colocated_fog", where);
        topo.access_points.push_back(ap);
    }

    const json& routers = r.array(doc, "routers", "document");
    for (std::size_t i = 0; i < routers.size(); ++i) {
        const json& a = routers[i];
        std::string where = "routers[" + std::to_string(i) + "]";
        RouterProfile rp;
        rp.id = r.text(a, "id", where);
        auto kind = parse_router_kind(r.text(a, "kind", where));
        if (!kind) r.fail(where + ".kind", "unknown router kind");
        rp.kind = *kind;
        rp.transfer_energy.upload = units::nj_per_bit_to_j_per_byte(r.number(a, "upload_nj_per_bit", where));
        rp.transfer_energy.download = units::nj_per_bit_to_j_per_byte(r.number(a, "download_nj_per_bit", where));
        topo.routers.push_back(rp);
    }

    const json& links = r.array(doc, "links", "document");
    for (std::size_t i = 0; i < links.size(); ++i) {
        const json& a = links[i];
        std::string where = "links[" + std::to_string(i) + "]";
        Link l;
        l.a = r.text(a, "a", where);
        l.b = r.text(a, "b", where);
        l.delay = r.number(a, "delay_s", where);
        l.uplink_rate = r.number(a, "uplink_bps", where);
        l.downlink_rate = r.number(a, "downlink_bps", where);
        l.unit_cost = r.number(a, "cost_usd_per_gib", where) / link_cost_unit;
        auto tier = parse_link_tier(r.text(a, "tier", where));
        if (!tier) r.fail(where + ".tier", "unknown link tier");
        l.tier = *tier;
        topo.links.push_back(l);
    }

    if (doc.contains("vehicles")) {
        const json& v = r.array(doc, "vehicles", "document");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) r.fail("vehicles[" + std::to_string(i) + "]", "expected a string");
            topo.vehicles.push_back(v[i].get<std::string>());
        }
    }
}

namespace {

// File-unit value whose read-back conversion `back` reproduces `v` exactly
// when one exists within a few ulps of the plain quotient; files written
// from memory then load to bit-identical scenarios.
template <class Back>
double file_value(double v, double plain, Back back) {
    if (back(plain) == v || !std::isfinite(plain)) return plain;
    double up = plain, down = plain;
    for (int k = 0; k < 8; ++k) {
        up = std::nextafter(up, HUGE_VAL);
        down = std::nextafter(down, -HUGE_VAL);
        if (back(up) == v) return up;
        if (back(down) == v) return down;
    }
    return plain;
}

} // namespace

std::string write_topology(const Scenario& s) {
    const ScenarioSettings& st = s.settings;
    const double eur = st.eur_to_usd;
    auto from_eur = [&](double usd) {
        return file_value(usd, usd / (1e-3 * eur), [&](double x) { return x * 1e-3 * eur; });
    };
    auto scaled = [](double v, double unit) {
        return file_value(v, v * unit, [&](double x) { return x / unit; });
    };
    auto nj = [](double j) {
        return file_value(j, j / units::nj_per_bit_to_j_per_byte(1.0),
                          [](double x) { return units::nj_per_bit_to_j_per_byte(x); });
    };
    json doc;
    doc["schema_version"] = schema_version;
    doc["name"] = s.name;
    doc["seed"] = s.seed;
    doc["settings"] = {
        {"slot_length_s", st.slot_length},
        {"utilization_cap", st.utilization_cap},
        {"startup_delay_s", st.startup_delay},
        {"eur_to_usd", st.eur_to_usd},
        {"credit_basis_requests", st.credit_basis_requests},
        {"rounds_per_profile", st.rounds_per_profile},
        {"fallback_ap", st.fallback_ap},
    };
    doc["prices"] = {
        {"nonrenewable_usd_per_kwh", s.prices.nonrenewable_energy},
        {"renewable_eur_per_mwh", from_eur(s.prices.renewable_energy)},
        {"carbon_eur_per_tonne", from_eur(s.prices.carbon)},
        {"emission_kg_per_kwh", s.prices.emission_rate},
    };
    json nodes = json::array();
    for (std::size_t i = 0; i < s.topology.nodes.size(); ++i) {
        const Node& n = s.topology.nodes[i];
        const NodePrices& np = s.prices.node[i];
        nodes.push_back({
            {"id", n.id},
            {"kind", to_string(n.kind)},
            {"cpu_mips", n.cpu_capacity},
            {"ram_bytes", n.ram_capacity},
            {"storage_bytes", n.storage_capacity},
            {"unit_count", n.unit_count},
            {"unit_mips", n.unit_rate},
            {"idle_w", n.idle_power},
            {"max_w", n.max_power},
            {"renewable_ratio", n.renewable_ratio},
            {"pue", n.pue},
            {"active", n.active},
            {"unbounded", n.unbounded},
            {"attached_router", n.attached_router},
            {"cpu_usd_per_mi", np.cpu},
            {"ram_usd_per_mib_ms", scaled(np.ram, ram_price_unit)},
            {"storage_usd_per_gib_month", scaled(np.storage, storage_price_unit)},
        });
    }
    doc["nodes"] = nodes;
    json aps = json::array();
    for (const auto& ap : s.topology.access_points) {
        aps.push_back({
            {"id", ap.id},
            {"x_m", ap.x},
            {"y_m", ap.y},
            {"coverage_m", ap.coverage_radius},
            {"renewable_ratio", ap.renewable_ratio},
            {"upload_nj_per_bit", nj(ap.transfer_energy.upload)},
            {"download_nj_per_bit", nj(ap.transfer_energy.download)},
            {"uplink_bps", ap.uplink_rate},
            {"downlink_bps", ap.downlink_rate},
            {"radio_delay_s", ap.radio_delay},
            {"colocated_fog", ap.colocated_fog},
        });
    }
    doc["access_points"] = aps;
    json routers = json::array();
    for (const auto& r : s.topology.routers) {
        routers.push_back({
            {"id", r.id},
            {"kind", to_string(r.kind)},
            {"upload_nj_per_bit", nj(r.transfer_energy.upload)},
            {"download_nj_per_bit", nj(r.transfer_energy.download)},
        });
    }
    doc["routers"] = routers;
    json links = json::array();
    for (const auto& l : s.topology.links) {
        links.push_back({
            {"a", l.a},
            {"b", l.b},
            {"delay_s", l.delay},
            {"uplink_bps", l.uplink_rate},
            {"downlink_bps", l.downlink_rate},
            {"cost_usd_per_gib", scaled(l.unit_cost, link_cost_unit)},
            {"tier", to_string(l.tier)},
        });
    }
    doc["links"] = links;
    doc["vehicles"] = s.topology.vehicles;
    return doc.dump(2) + "\n";
}

// --------------------------------------------------------------------- CSV

namespace {

struct CsvRow {
    std::size_t line;
    std::vector<std::string> fields;
};

struct Csv {
    std::string name;
    std::vector<std::string> header;
    std::vector<CsvRow> rows;

    double number(const CsvRow& row, std::size_t col) const {
        const std::string& f = row.fields[col];
        double v = 0.0;
        const char* begin = f.data();
        const char* end = f.data() + f.size();
        auto res = std::from_chars(begin, end, v);
        if (f.empty() || res.ec != std::errc() || res.ptr != end)
            throw ParseError(name, row.line, col + 1, "expected a number in column '" + header[col] + "', got '" + f + "'");
        return v;
    }
    long integer(const CsvRow& row, std::size_t col) const {
        const std::string& f = row.fields[col];
        long v = 0;
        auto res = std::from_chars(f.data(), f.data() + f.size(), v);
        if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size() || v < 0)
            throw ParseError(name, row.line, col + 1,
                             "expected a non-negative integer in column '" + header[col] + "', got '" + f + "'");
        return v;
    }
    const std::string& text(const CsvRow& row, std::size_t col) const {
        if (row.fields[col].empty())
            throw ParseError(name, row.line, col + 1, "empty value in column '" + header[col] + "'");
        return row.fields[col];
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

Csv read_csv(const std::string& text, const std::string& name, const std::vector<std::string>& expected) {
    Csv csv;
    csv.name = name;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line);
        if (!have_header) {
            if (fields != expected) {
                std::string want;
                for (const auto& e : expected) want += (want.empty() ? "" : ",") + e;
                throw ParseError(name, number, 1, "unexpected header; expected '" + want + "'");
            }
            csv.header = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != expected.size())
            throw ParseError(name, number, std::min(fields.size(), expected.size()) + 1,
                             "row " + std::to_string(number) + " has " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(expected.size()));
        csv.rows.push_back({number, std::move(fields)});
    }
    // An entirely empty file is an empty table.
    if (!have_header) csv.header = expected;
    return csv;
}

const std::vector<std::string> services_header = {"service", "vehicle", "cpu_mi", "ram_bytes", "storage_bytes",
                                                  "request_bytes", "response_bytes", "deadline_s", "qos",
                                                  "monthly_price_usd"};
const std::vector<std::string> iot_header = {"profile", "service", "arrival_rate_rps"};
const std::vector<std::string> mobility_header = {"round", "vehicle", "ap", "coverage_m",
                                                  "reg_time_s", "wait_s", "speed_mps"};

std::string join_header(const std::vector<std::string>& h) {
    std::string s;
    for (const auto& f : h) s += (s.empty() ? "" : ",") + f;
    return s + "\n";
}

} // namespace

std::vector<Service> parse_services(const std::string& text, const std::string& name) {
    Csv csv = read_csv(text, name, services_header);
    std::vector<Service> out;
    for (const auto& row : csv.rows) {
        Service s;
        s.id = csv.text(row, 0);
        s.vehicle = csv.text(row, 1);
        s.cpu_demand = csv.number(row, 2);
        s.ram_demand = csv.number(row, 3);
        s.storage_demand = csv.number(row, 4);
        s.request_size = csv.number(row, 5);
        s.response_size = csv.number(row, 6);
        s.deadline = csv.number(row, 7);
        s.qos_level = csv.number(row, 8);
        s.monthly_price = csv.number(row, 9);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::unordered_map<std::string, double>> parse_iot_profiles(const std::string& text,
                                                                         const std::string& name) {
    Csv csv = read_csv(text, name, iot_header);
    std::vector<std::unordered_map<std::string, double>> out;
    for (const auto& row : csv.rows) {
        std::size_t p = static_cast<std::size_t>(csv.integer(row, 0));
        if (out.size() <= p) out.resize(p + 1);
        const std::string& id = csv.text(row, 1);
        if (out[p].count(id))
            throw ParseError(name, row.line, 2, "duplicate rate for service '" + id + "' in profile " + std::to_string(p));
        out[p][id] = csv.number(row, 2);
    }
    return out;
}

std::vector<std::vector<MobilityTrace>> parse_mobility(const std::string& text, const std::string& name) {
    Csv csv = read_csv(text, name, mobility_header);
    // round -> vehicle -> trace; vehicle order by id for determinism.
    std::map<std::size_t, std::map<std::string, MobilityTrace>> grouped;
    std::size_t rounds = 0;
    for (const auto& row : csv.rows) {
        std::size_t r = static_cast<std::size_t>(csv.integer(row, 0));
        rounds = std::max(rounds, r + 1);
        const std::string& v = csv.text(row, 1);
        CoverageSegment seg;
        seg.ap = csv.text(row, 2);
        seg.coverage_length = csv.number(row, 3);
        seg.registration_time = csv.number(row, 4);
        seg.wait_time = csv.number(row, 5);
        double speed = csv.number(row, 6);
        auto [it, fresh] = grouped[r].try_emplace(v);
        MobilityTrace& t = it->second;
        if (fresh) {
            t.vehicle = v;
            t.speed = speed;
        } else if (t.speed != speed) {
            throw ParseError(name, row.line, 7, "speed of vehicle '" + v + "' differs within round " + std::to_string(r));
        }
        t.segments.push_back(std::move(seg));
    }
    std::vector<std::vector<MobilityTrace>> out(rounds);
    for (auto& [r, vehicles] : grouped)
        for (auto& [id, trace] : vehicles) out[r].push_back(std::move(trace));
    return out;
}

std::string write_services(const std::vector<Service>& services) {
    std::string s = join_header(services_header);
    for (const auto& sv : services) {
        s += sv.id + "," + sv.vehicle + "," + format_double(sv.cpu_demand) + "," + format_double(sv.ram_demand) + "," +
             format_double(sv.storage_demand) + "," + format_double(sv.request_size) + "," +
             format_double(sv.response_size) + "," + format_double(sv.deadline) + "," + format_double(sv.qos_level) +
             "," + format_double(sv.monthly_price) + "\n";
    }
    return s;
}

std::string write_iot_profiles(const std::vector<std::unordered_map<std::string, double>>& profiles) {
    std::string s = join_header(iot_header);
    for (std::size_t p = 0; p < profiles.size(); ++p) {
        std::vector<std::pair<std::string, double>> rows(profiles[p].begin(), profiles[p].end());
        std::sort(rows.begin(), rows.end());
        for (const auto& [id, rate] : rows) s += std::to_string(p) + "," + id + "," + format_double(rate) + "\n";
    }
    return s;
}

std::string write_mobility(const std::vector<std::vector<MobilityTrace>>& traces) {
    std::string s = join_header(mobility_header);
    for (std::size_t r = 0; r < traces.size(); ++r)
        for (const auto& t : traces[r])
            for (const auto& seg : t.segments)
                s += std::to_string(r) + "," + t.vehicle + "," + seg.ap + "," + format_double(seg.coverage_length) +
                     "," + format_double(seg.registration_time) + "," + format_double(seg.wait_time) + "," +
                     format_double(t.speed) + "\n";
    return s;
}

Scenario load_scenario(const ScenarioFiles& files) {
    Scenario s;
    parse_topology(read_file(files.topology), files.topology.string(), s);
    s.services = parse_services(read_file(files.services), files.services.string());
    s.iot_profiles = parse_iot_profiles(read_file(files.iot), files.iot.string());
    s.traces = parse_mobility(read_file(files.mobility), files.mobility.string());
    return s;
}

void save_scenario(const Scenario& scenario, const ScenarioFiles& files) {
    write_file(files.topology, write_topology(scenario));
    write_file(files.services, write_services(scenario.services));
    write_file(files.iot, write_iot_profiles(scenario.iot_profiles));
    write_file(files.mobility, write_mobility(scenario.traces));
}

} // namespace mera
