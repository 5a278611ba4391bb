#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixture.hpp"
#include "mera/validate.hpp"

using namespace mera;

namespace {

bool mentions(const std::vector<Diagnostic>& d, const std::string& where, const std::string& what) {
    return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) {
        return x.where == where && x.what.find(what) != std::string::npos;
    });
}

} // namespace

TEST_CASE("the fixture is well formed") {
    auto diags = check_scenario(fixture::small_scenario());
    CHECK_MESSAGE(diags.empty(), format_diagnostics(diags));
    auto r = validate_scenario(fixture::small_scenario());
    REQUIRE(std::holds_alternative<ValidatedScenario>(r));
}

TEST_CASE("capacity inconsistency is reported") {
    Scenario s = fixture::small_scenario();
    s.topology.nodes[1].unit_rate = 9000.0; // 4 x 9000 != 40000
    auto d = check_scenario(s);
    CHECK(mentions(d, "nodes[1].cpu_capacity", "capacity inconsistency"));
    CHECK(std::holds_alternative<std::vector<Diagnostic>>(validate_scenario(s)));
}

TEST_CASE("dangling references are reported") {
    Scenario s = fixture::small_scenario();
    s.services[1].vehicle = "v-9";
    CHECK(mentions(check_scenario(s), "services[1].vehicle", "dangling reference"));

    Scenario t = fixture::small_scenario();
    t.topology.links[3].b = "fog-7";
    CHECK(mentions(check_scenario(t), "links[3].b", "dangling reference"));
}

TEST_CASE("qos level and slot length ranges") {
    for (double eta : {0.0, 1.0, 1.2, -0.1}) {
        Scenario s = fixture::small_scenario();
        s.services[0].qos_level = eta;
        CHECK(mentions(check_scenario(s), "services[0].qos_level", "(0,1)"));
    }
    for (double tau : {0.0, -300.0}) {
        Scenario s = fixture::small_scenario();
        s.settings.slot_length = tau;
        CHECK(mentions(check_scenario(s), "settings.slot_length", "positive"));
    }
}

TEST_CASE("one diagnostic per malformed field") {
    Scenario s = fixture::small_scenario();
    s.topology.nodes[0].unit_count = 3;
    s.services[2].vehicle = "nobody";
    s.services[0].qos_level = 1.5;
    s.settings.slot_length = 0.0;
    auto d = check_scenario(s);
    CHECK(d.size() == 4);
    std::set<std::string> where;
    for (const auto& x : d) where.insert(x.where);
    CHECK(where.size() == d.size());
    CHECK(where.count("nodes[0].cpu_capacity"));
    CHECK(format_diagnostics(d).find("services[2].vehicle") != std::string::npos);
}
