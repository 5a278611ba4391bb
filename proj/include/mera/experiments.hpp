#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mera/objectives.hpp"
#include "mera/simulation.hpp"
#include "mera/synth.hpp"

namespace mera {

inline constexpr const char* known_suites[] = {"exp1", "exp2", "exp3", "exp4", "lambda"};

std::vector<double> default_lambda_grid();   // 0, 0.05, ..., 1
std::vector<double> default_capacity_ratios(); // 0.80, 0.85, ..., 1.20
// Active fog counts of the capacity sweep, scaled from the 10..110 step 5
// grid to a fog tier of `fog_count` nodes.
std::vector<std::size_t> capacity_node_counts(std::size_t fog_count, std::size_t steps = 21);

struct SuiteConfig {
    std::vector<std::string> suites{"exp1", "exp2", "exp3", "exp4", "lambda"};
    std::vector<Strategy> strategies{Strategy::mera, Strategy::baseline, Strategy::greedy};
    std::vector<double> lambdas{0.05};          // MERA weight in exp1-exp4
    std::vector<double> lambda_grid = default_lambda_grid();
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<Regime> regimes{Regime::default_routes, Regime::optimized_routes};
    int max_iterations = 40;
    std::size_t plan_count = 20;
    std::size_t branching = 2;

    std::size_t exp1_profiles = 12;
    std::size_t exp2_window = 12;
    std::size_t exp2_stride = 20;
    std::size_t exp2_seeds = 1;
    std::vector<double> exp3_ratios = default_capacity_ratios();
    std::size_t exp3_node_steps = 21;
    int exp3_rounds = 2;
    double exp3_cap = 1.0;
    std::size_t exp4_profiles = 12;
    int lambda_rounds = 3;

    // Use this scenario directory for every run instead of generated ones.
    std::optional<std::filesystem::path> scenario_dir;
    std::size_t workers = 1;
};

struct RowKey {
    std::string suite;
    std::string regime;
    std::uint64_t seed = 0;
    std::string strategy;
    std::optional<double> lambda;
    std::optional<double> ratio;
    std::optional<int> active_nodes;
    std::optional<int> window;
    std::optional<int> round;
};

struct MetricRow {
    RowKey key;
    std::string metric;
    double value = 0.0;
};

struct IterationRow {
    RowKey key;
    IterationRecord record;
};

struct CapacityRow {
    double ratio = 0.0;
    int active_nodes = 0;
    std::uint64_t rep = 0;
    std::vector<double> cost;           // mean total cost per round, by strategy run
    std::vector<double> variation;      // mean CV of active-fog CPU utilisation
    std::vector<double> cloud_fraction;
};

struct NodeRow {
    std::string regime;
    std::uint64_t seed = 0;
    std::string strategy;
    std::string node;
    double renewable_ratio = 0.0;
    double utilization = 0.0; // mean CPU share over the window
};

struct SuiteResult {
    std::vector<MetricRow> metrics;
    std::vector<IterationRow> iterations;
    std::vector<std::string> capacity_runs; // column labels of CapacityRow vectors
    std::vector<CapacityRow> capacity;
    std::vector<NodeRow> nodes;
    std::size_t rounds = 0;
    std::size_t infeasible_rounds = 0;
    std::size_t nonmonotone_rounds = 0;

    bool invariants_hold() const { return infeasible_rounds == 0 && nonmonotone_rounds == 0; }
};

SuiteResult run_suites(const SuiteConfig& config);

// Files written: metrics.csv, iterations.csv, exp3_summary.csv (exp3),
// exp4_nodes.csv (exp4) and manifest.json.
void write_results(const SuiteResult& result, const SuiteConfig& config, const std::filesystem::path& out_dir);

std::string metrics_csv(const SuiteResult& result);
std::string iterations_csv(const SuiteResult& result);
std::string capacity_csv(const SuiteResult& result);
std::string nodes_csv(const SuiteResult& result);
std::string manifest_json(const SuiteResult& result, const SuiteConfig& config);

} // namespace mera
