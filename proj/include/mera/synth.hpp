#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mera/model.hpp"

namespace mera {

// Route regimes of the mobility generator. `default_routes` concentrates
// vehicles around a few popular access points and keeps them in the area
// for longer; `optimized_routes` spreads them uniformly and moves them out
// faster.
enum class Regime { default_routes, optimized_routes };

const char* to_string(Regime r);
std::optional<Regime> parse_regime(const std::string& s);

struct SynthOptions {
    // Regime-specific mobility knobs; see regime_defaults().
    std::uint64_t seed = 1;
    Regime regime = Regime::default_routes;
    std::size_t vehicles = 200;      // pool size
    std::size_t rounds = 36;         // mobility rounds emitted
    std::size_t profiles = 192;      // 15-minute IoT profiles
    std::size_t access_points = 15;  // each with a colocated edge fog
    std::size_t core_fogs = 5;
    double slot_length = 300.0;
    // MIPS granted per datasheet GFLOPS (desk scale shrinks the servers so
    // that a few hundred vehicles load them meaningfully).
    double mips_per_gflops = 20.0;
    double mean_arrival_rate = 10.0; // req/s at the profile mean
    double deadline_min = 0.030;     // s
    double deadline_max = 0.040;

    // Mobility. Set by regime_defaults().
    double popularity_skew = 1.3;     // Zipf exponent of AP popularity (0 = uniform)
    double mean_presence_rounds = 8;  // expected rounds a vehicle stays in the area
    double speed_min = 3.0, speed_max = 8.0; // m/s
    double park_min = 120.0, park_max = 900.0; // s parked at each destination
};

// Options for a regime with every regime-specific knob filled in.
SynthOptions regime_defaults(Regime regime, std::uint64_t seed);

// Complete scenario: topology, price book, one service per vehicle, IoT
// profiles and mobility traces. Same options -> identical scenario.
Scenario synthesize(const SynthOptions& options);

// Helpers exposed for tests.
double chord_length(double x0, double y0, double x1, double y1, double cx, double cy, double radius);

} // namespace mera
