#include "mera/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>

#include <json.hpp>

#include "mera/infra_planner.hpp"
#include "mera/parallel.hpp"
#include "mera/rng.hpp"
#include "mera/scenario_io.hpp"
#include "mera/stats.hpp"
#include "mera/validate.hpp"

#ifndef MERA_VERSION
#define MERA_VERSION "0.0.0"
#endif

namespace mera {

std::vector<double> default_lambda_grid() {
    std::vector<double> out;
    for (int k = 0; k <= 20; ++k) out.push_back(k / 20.0);
    return out;
}

std::vector<double> default_capacity_ratios() {
    std::vector<double> out;
    for (int k = 0; k <= 8; ++k) out.push_back((80 + 5 * k) / 100.0);
    return out;
}

std::vector<std::size_t> capacity_node_counts(std::size_t fog_count, std::size_t steps) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < steps; ++k) {
        const double scaled = static_cast<double>(fog_count) * (10.0 + 5.0 * k) / 110.0;
        const auto n = static_cast<std::size_t>(std::llround(scaled));
        out.push_back(std::clamp<std::size_t>(n, 1, std::max<std::size_t>(fog_count, 1)));
    }
    return out;
}

namespace {

struct StrategyRun {
    Strategy kind;
    double lambda;
    std::string label;
};

std::vector<StrategyRun> strategy_runs(const SuiteConfig& c) {
    std::vector<StrategyRun> out;
    for (Strategy s : c.strategies) {
        if (s != Strategy::mera) {
            out.push_back({s, 0.0, to_string(s)});
            continue;
        }
        for (double l : c.lambdas) {
            std::string label = "mera";
            if (c.lambdas.size() > 1) label += "_l" + format_double(l);
            out.push_back({s, l, label});
        }
    }
    return out;
}

// Validated scenarios keyed by (regime label, seed), generated up front.
class ScenarioStore {
public:
    explicit ScenarioStore(const SuiteConfig& c) : config_(c) {
        if (c.scenario_dir) {
            auto result = validate_scenario(load_scenario(ScenarioFiles::in(*c.scenario_dir)));
            if (auto* d = std::get_if<std::vector<Diagnostic>>(&result))
                throw std::runtime_error("invalid scenario:\n" + format_diagnostics(*d));
            fixed_ = std::make_shared<ValidatedScenario>(std::move(std::get<ValidatedScenario>(result)));
        }
    }

    std::string label(Regime r) const { return config_.scenario_dir ? "file" : to_string(r); }

    void require(Regime r, std::uint64_t seed) {
        if (!fixed_) wanted_.emplace(std::make_pair(r, seed), nullptr);
    }

    void generate(std::size_t workers) {
        std::vector<std::pair<Regime, std::uint64_t>> keys;
        for (auto& [k, v] : wanted_)
            if (!v) keys.push_back(k);
        std::vector<std::shared_ptr<const ValidatedScenario>> built(keys.size());
        parallel_for(keys.size(), [&](std::size_t i) {
            auto result = validate_scenario(synthesize(regime_defaults(keys[i].first, keys[i].second)));
            if (auto* d = std::get_if<std::vector<Diagnostic>>(&result))
                throw std::runtime_error("generated scenario failed validation:\n" + format_diagnostics(*d));
            built[i] = std::make_shared<ValidatedScenario>(std::move(std::get<ValidatedScenario>(result)));
        }, workers);
        for (std::size_t i = 0; i < keys.size(); ++i) wanted_[keys[i]] = built[i];
    }

    const ValidatedScenario& get(Regime r, std::uint64_t seed) const {
        if (fixed_) return *fixed_;
        return *wanted_.at({r, seed});
    }

private:
    const SuiteConfig& config_;
    std::shared_ptr<const ValidatedScenario> fixed_;
    std::map<std::pair<Regime, std::uint64_t>, std::shared_ptr<const ValidatedScenario>> wanted_;
};

struct TaskOutput {
    std::vector<MetricRow> metrics;
    std::vector<IterationRow> iterations;
    std::vector<CapacityRow> capacity;
    std::vector<NodeRow> nodes;
    std::size_t rounds = 0;
    std::size_t infeasible = 0;
    std::size_t nonmonotone = 0;

    void count(const RoundOutcome& r) {
        ++rounds;
        if (!r.violations.empty()) ++infeasible;
        if (!r.monotone) ++nonmonotone;
    }
};

void emit_round(TaskOutput& out, const RowKey& key, const RoundOutcome& r, bool keep_iterations) {
    auto put = [&](const char* name, double v) { out.metrics.push_back({key, name, v}); };
    put("variance", r.variance);
    put("incentive", r.incentive);
    put("processing_cost", r.cost.processing);
    put("ram_cost", r.cost.ram);
    put("storage_cost", r.cost.storage);
    put("deployment_cost", r.cost.deployment);
    put("communication_cost", r.cost.communication);
    put("energy_cost", r.cost.energy);
    put("carbon_cost", r.cost.carbon);
    put("violation_cost", r.cost.violation);
    put("total_cost", r.cost.total);
    put("nonrenewable_power", r.cost.nonrenewable_power);
    put("services", static_cast<double>(r.services));
    put("cloud_fraction", r.services ? static_cast<double>(r.cloud_hosted) / r.services : 0.0);
    put("spilled", static_cast<double>(r.spilled));
    put("relocated", static_cast<double>(r.relocated));
    if (!r.iterations.empty()) {
        put("iterations", static_cast<double>(r.iterations.size()));
        put("selected_local_cost", r.iterations.back().local_cost);
        put("selected_global_cost", r.iterations.back().global_cost);
        put("combined_cost", r.iterations.back().combined_cost);
    }
    if (keep_iterations)
        for (const auto& it : r.iterations) out.iterations.push_back({key, it});
    out.count(r);
}

StrategySettings settings_for(const SuiteConfig& c, const StrategyRun& run, Objective objective) {
    StrategySettings s;
    s.kind = run.kind;
    s.objective = objective;
    s.lambda = run.lambda;
    s.branching = c.branching;
    s.max_iterations = c.max_iterations;
    s.plans.count = c.plan_count;
    return s;
}

RowKey make_key(const std::string& suite, const std::string& regime, std::uint64_t seed, const StrategyRun& run) {
    RowKey k;
    k.suite = suite;
    k.regime = regime;
    k.seed = seed;
    k.strategy = to_string(run.kind);
    if (run.kind == Strategy::mera) k.lambda = run.lambda;
    return k;
}

void run_window(TaskOutput& out, const ValidatedScenario& vs, RowKey key, const HorizonSpec& horizon,
                const StrategySettings& settings, std::uint64_t seed) {
    const auto rounds = run_horizon(vs, horizon, settings, seed);
    for (const auto& r : rounds) {
        key.round = static_cast<int>(&r - rounds.data());
        emit_round(out, key, r, true);
    }
}

double profile_load(const Scenario& s, std::size_t p) {
    double sum = 0.0;
    for (const auto& [id, z] : s.iot_profiles[p]) sum += z;
    return sum;
}

// Window start with the steepest aggregate demand increase over `length`
// profiles; lowest start on ties.
std::size_t rising_window(const Scenario& s, std::size_t length) {
    const std::size_t n = s.iot_profiles.size();
    if (n <= length) return 0;
    std::size_t best = 0;
    double best_rise = -std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w + length <= n; ++w) {
        const double rise = profile_load(s, w + length - 1) - profile_load(s, w);
        if (rise > best_rise) {
            best_rise = rise;
            best = w;
        }
    }
    return best;
}

bool wants(const SuiteConfig& c, const std::string& suite) {
    return std::find(c.suites.begin(), c.suites.end(), suite) != c.suites.end();
}

} // namespace

SuiteResult run_suites(const SuiteConfig& config) {
    for (const auto& s : config.suites)
        if (std::find(std::begin(known_suites), std::end(known_suites), s) == std::end(known_suites))
            throw std::invalid_argument("unknown suite '" + s + "'");
    if (config.seeds.empty()) throw std::invalid_argument("no seeds");
    if (config.regimes.empty()) throw std::invalid_argument("no regimes");

    const auto runs = strategy_runs(config);
    const std::size_t workers = std::max<std::size_t>(config.workers, 1);
    const std::vector<Regime> regimes =
        config.scenario_dir ? std::vector<Regime>{config.regimes.front()} : config.regimes;
    const Regime primary = regimes.front();
    const std::vector<std::uint64_t> exp2_seeds(
        config.seeds.begin(), config.seeds.begin() + std::min(config.exp2_seeds, config.seeds.size()));

    ScenarioStore store(config);
    for (Regime r : regimes)
        for (auto seed : config.seeds) store.require(r, seed);
    store.generate(workers);

    std::vector<std::function<void(TaskOutput&)>> tasks;
    SuiteResult result;

    if (wants(config, "exp1")) {
        for (Regime regime : regimes)
            for (auto seed : config.seeds)
                for (const auto& run : runs)
                    tasks.push_back([&, regime, seed, run](TaskOutput& out) {
                        const auto& vs = store.get(regime, seed);
                        HorizonSpec h;
                        h.utilization_cap = vs.scenario.settings.utilization_cap;
                        h.rounds = profile_rounds(0, config.exp1_profiles, vs.scenario.settings.rounds_per_profile,
                                                  vs.scenario.traces.size());
                        run_window(out, vs, make_key("exp1", store.label(regime), seed, run), h,
                                   settings_for(config, run, Objective::min_var), seed);
                    });
    }

    if (wants(config, "exp2")) {
        for (Regime regime : regimes)
            for (auto seed : exp2_seeds) {
                const auto& vs = store.get(regime, seed);
                const std::size_t profiles = vs.scenario.iot_profiles.size();
                const std::size_t stride = std::max<std::size_t>(config.exp2_stride, 1);
                for (std::size_t w = 0; w + config.exp2_window <= profiles; w += stride)
                    for (const auto& run : runs)
                        tasks.push_back([&, regime, seed, run, w](TaskOutput& out) {
                            const auto& vs = store.get(regime, seed);
                            HorizonSpec h;
                            h.utilization_cap = vs.scenario.settings.utilization_cap;
                            h.rounds = profile_rounds(w, config.exp2_window,
                                                      vs.scenario.settings.rounds_per_profile,
                                                      vs.scenario.traces.size());
                            RowKey key = make_key("exp2", store.label(regime), seed, run);
                            key.window = static_cast<int>(w);
                            run_window(out, vs, key, h, settings_for(config, run, Objective::min_var), seed);
                        });
            }
    }

    if (wants(config, "exp3")) {
        // One summary row per (ratio, node count, seed); each row carries a
        // cost and a balance figure for every strategy run.
        for (const auto& run : runs) result.capacity_runs.push_back(run.label);
        const std::size_t fogs = store.get(primary, config.seeds.front()).scenario.topology.fog_nodes().size();
        const auto counts = capacity_node_counts(fogs, config.exp3_node_steps);
        for (double ratio : config.exp3_ratios)
            for (std::size_t count : counts)
                for (auto rep : config.seeds)
                    tasks.push_back([&, ratio, count, rep](TaskOutput& out) {
                        const auto& vs = store.get(primary, rep);
                        const auto& base = vs.scenario.topology.nodes;
                        const std::uint64_t planner_seed = mix_seed({rep, count, 0xca9});
                        HorizonSpec h;
                        h.utilization_cap = config.exp3_cap;
                        h.rounds = profile_rounds(0, 1, config.exp3_rounds, vs.scenario.traces.size());
                        h.configure = [&base, ratio, count, planner_seed](const std::vector<Service>& svc) {
                            return plan_capacity(current_demand(svc), base, ratio, count, planner_seed).nodes;
                        };
                        CapacityRow row;
                        row.ratio = ratio;
                        row.active_nodes = static_cast<int>(count);
                        row.rep = rep;
                        for (const auto& run : runs) {
                            const auto rounds =
                                run_horizon(vs, h, settings_for(config, run, Objective::min_var), rep);
                            double cost = 0.0, cv = 0.0, cloud = 0.0;
                            for (const auto& r : rounds) {
                                out.count(r);
                                cost += r.cost.total;
                                std::vector<double> cpu;
                                for (std::size_t j = 0; j < r.active_fog.size(); ++j)
                                    if (r.active_fog[j]) cpu.push_back(r.utilization[2 * j]);
                                cv += stats::coefficient_of_variation(cpu);
                                cloud += r.services ? static_cast<double>(r.cloud_hosted) / r.services : 0.0;
                            }
                            const double n = std::max<std::size_t>(rounds.size(), 1);
                            row.cost.push_back(cost / n);
                            row.variation.push_back(cv / n);
                            row.cloud_fraction.push_back(cloud / n);
                        }
                        out.capacity.push_back(std::move(row));
                    });
    }

    if (wants(config, "exp4")) {
        for (Regime regime : regimes)
            for (auto seed : config.seeds)
                for (const auto& run : runs)
                    tasks.push_back([&, regime, seed, run](TaskOutput& out) {
                        const auto& vs = store.get(regime, seed);
                        const std::size_t w = rising_window(vs.scenario, config.exp4_profiles);
                        HorizonSpec h;
                        h.utilization_cap = vs.scenario.settings.utilization_cap;
                        h.rounds = profile_rounds(w, config.exp4_profiles, vs.scenario.settings.rounds_per_profile,
                                                  vs.scenario.traces.size());
                        RowKey key = make_key("exp4", store.label(regime), seed, run);
                        key.window = static_cast<int>(w);
                        const auto rounds =
                            run_horizon(vs, h, settings_for(config, run, Objective::incentive), seed);
                        const auto& nodes = vs.scenario.topology.nodes;
                        std::vector<double> mean_cpu(nodes.size(), 0.0);
                        for (const auto& r : rounds) {
                            key.round = static_cast<int>(&r - rounds.data());
                            emit_round(out, key, r, true);
                            for (std::size_t j = 0; j < nodes.size(); ++j)
                                mean_cpu[j] += r.utilization[2 * j] / static_cast<double>(rounds.size());
                        }
                        std::vector<double> util, share;
                        for (std::size_t j = 0; j < nodes.size(); ++j) {
                            if (!nodes[j].active) continue;
                            out.nodes.push_back({store.label(regime), seed, run.label, nodes[j].id,
                                                 nodes[j].renewable_ratio, mean_cpu[j]});
                            if (nodes[j].is_cloud()) continue;
                            util.push_back(mean_cpu[j]);
                            share.push_back(nodes[j].renewable_ratio);
                        }
                        key.round.reset();
                        out.metrics.push_back({key, "renewable_spearman", stats::spearman(share, util)});
                    });
    }

    if (wants(config, "lambda")) {
        for (auto seed : config.seeds)
            for (double lambda : config.lambda_grid)
                tasks.push_back([&, seed, lambda](TaskOutput& out) {
                    const auto& vs = store.get(primary, seed);
                    const StrategyRun run{Strategy::mera, lambda, "mera"};
                    HorizonSpec h;
                    h.utilization_cap = vs.scenario.settings.utilization_cap;
                    h.rounds = profile_rounds(0, 1, config.lambda_rounds, vs.scenario.traces.size());
                    run_window(out, vs, make_key("lambda", store.label(primary), seed, run), h,
                               settings_for(config, run, Objective::min_var), seed);
                });
    }

    std::vector<TaskOutput> outputs(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t i) { tasks[i](outputs[i]); }, workers);

    for (auto& o : outputs) {
        auto move_all = [](auto& dst, auto& src) {
            dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
        };
        move_all(result.metrics, o.metrics);
        move_all(result.iterations, o.iterations);
        move_all(result.capacity, o.capacity);
        move_all(result.nodes, o.nodes);
        result.rounds += o.rounds;
        result.infeasible_rounds += o.infeasible;
        result.nonmonotone_rounds += o.nonmonotone;
    }
    return result;
}

namespace {

template <class T>
std::string opt_field(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>) return format_double(*v);
    else return std::to_string(*v);
}

void key_fields(std::string& s, const RowKey& k) {
    s += k.suite;
    s += ',';
    s += k.regime;
    s += ',';
    s += std::to_string(k.seed);
    s += ',';
    s += k.strategy;
    s += ',';
    s += opt_field(k.lambda);
    s += ',';
    s += opt_field(k.ratio);
    s += ',';
    s += opt_field(k.active_nodes);
    s += ',';
    s += opt_field(k.window);
    s += ',';
    s += opt_field(k.round);
}

} // namespace

std::string metrics_csv(const SuiteResult& result) {
    std::string s = "suite,regime,seed,strategy,lambda,ratio,active_nodes,window,round,metric,value\n";
    for (const auto& m : result.metrics) {
        key_fields(s, m.key);
        s += ',' + m.metric + ',' + format_double(m.value) + '\n';
    }
    return s;
}

std::string iterations_csv(const SuiteResult& result) {
    std::string s = "suite,regime,seed,strategy,lambda,ratio,active_nodes,window,round,iteration,"
                    "combined_cost,local_cost,global_cost,evaluations\n";
    for (const auto& it : result.iterations) {
        key_fields(s, it.key);
        s += ',' + std::to_string(it.record.iteration) + ',' + format_double(it.record.combined_cost) + ',' +
             format_double(it.record.local_cost) + ',' + format_double(it.record.global_cost) + ',' +
             std::to_string(it.record.evaluations) + '\n';
    }
    return s;
}

std::string capacity_csv(const SuiteResult& result) {
    std::string s = "ratio,active_nodes,seed";
    for (const auto& l : result.capacity_runs) s += ',' + l + "_cost," + l + "_cpu_cv," + l + "_cloud_fraction";
    s += '\n';
    for (const auto& r : result.capacity) {
        s += format_double(r.ratio) + ',' + std::to_string(r.active_nodes) + ',' + std::to_string(r.rep);
        for (std::size_t k = 0; k < r.cost.size(); ++k)
            s += ',' + format_double(r.cost[k]) + ',' + format_double(r.variation[k]) + ',' +
                 format_double(r.cloud_fraction[k]);
        s += '\n';
    }
    return s;
}

std::string nodes_csv(const SuiteResult& result) {
    std::string s = "regime,seed,strategy,node,renewable_ratio,cpu_utilization\n";
    for (const auto& n : result.nodes)
        s += n.regime + ',' + std::to_string(n.seed) + ',' + n.strategy + ',' + n.node + ',' +
             format_double(n.renewable_ratio) + ',' + format_double(n.utilization) + '\n';
    return s;
}

std::string manifest_json(const SuiteResult& result, const SuiteConfig& c) {
    nlohmann::ordered_json j;
    j["tool"] = "mera";
    j["version"] = MERA_VERSION;
    j["schema_version"] = schema_version;
    j["suites"] = c.suites;
    std::vector<std::string> strategies, regimes;
    for (auto s : c.strategies) strategies.push_back(to_string(s));
    for (auto r : c.regimes) regimes.push_back(to_string(r));
    j["strategies"] = strategies;
    j["regimes"] = regimes;
    j["seeds"] = c.seeds;
    j["lambdas"] = c.lambdas;
    j["lambda_grid"] = c.lambda_grid;
    j["scenario"] = c.scenario_dir ? c.scenario_dir->string() : std::string("synthetic");
    j["parameters"] = {
        {"max_iterations", c.max_iterations}, {"plan_count", c.plan_count},
        {"branching", c.branching},           {"exp1_profiles", c.exp1_profiles},
        {"exp2_window", c.exp2_window},       {"exp2_stride", c.exp2_stride},
        {"exp2_seeds", c.exp2_seeds},         {"exp3_ratios", c.exp3_ratios},
        {"exp3_node_steps", c.exp3_node_steps}, {"exp3_rounds", c.exp3_rounds},
        {"exp3_utilization_cap", c.exp3_cap}, {"exp4_profiles", c.exp4_profiles},
        {"lambda_rounds", c.lambda_rounds},
    };
    std::vector<std::string> files{"metrics.csv", "iterations.csv"};
    if (wants(c, "exp3")) files.push_back("exp3_summary.csv");
    if (wants(c, "exp4")) files.push_back("exp4_nodes.csv");
    j["files"] = files;
    j["rounds"] = result.rounds;
    j["invariants"] = {{"infeasible_rounds", result.infeasible_rounds},
                       {"nonmonotone_rounds", result.nonmonotone_rounds},
                       {"hold", result.invariants_hold()}};
    return j.dump(2) + "\n";
}

void write_results(const SuiteResult& result, const SuiteConfig& config, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "metrics.csv", metrics_csv(result));
    write_file(out_dir / "iterations.csv", iterations_csv(result));
    if (wants(config, "exp3")) write_file(out_dir / "exp3_summary.csv", capacity_csv(result));
    if (wants(config, "exp4")) write_file(out_dir / "exp4_nodes.csv", nodes_csv(result));
    write_file(out_dir / "manifest.json", manifest_json(result, config));
}

} // namespace mera
