// mera: scenario validation, synthesis and experiment suites.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mera/experiments.hpp"
#include "mera/parallel.hpp"
#include "mera/scenario_io.hpp"
#include "mera/synth.hpp"
#include "mera/validate.hpp"

namespace {

// "3", "1-10" or "1,2,5-7".
std::vector<std::uint64_t> parse_seed_list(const std::vector<std::string>& items) {
    std::vector<std::uint64_t> out;
    for (const auto& item : items) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(std::stoull(item));
            continue;
        }
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("empty seed range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
    return out;
}

int cmd_validate(const std::string& dir) {
    auto result = mera::validate_scenario(mera::load_scenario(mera::ScenarioFiles::in(dir)));
    if (auto* d = std::get_if<std::vector<mera::Diagnostic>>(&result)) {
        std::cerr << mera::format_diagnostics(*d);
        return 1;
    }
    const auto& s = std::get<mera::ValidatedScenario>(result).scenario;
    std::cout << "ok: " << s.topology.nodes.size() << " nodes, " << s.topology.access_points.size()
              << " access points, " << s.services.size() << " services, " << s.iot_profiles.size()
              << " profiles, " << s.traces.size() << " mobility rounds\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobility-aware service placement experiments"};
    app.require_subcommand(1);

    std::string validate_dir;
    auto* validate = app.add_subcommand("validate", "Load a scenario directory and check its invariants");
    validate->add_option("dir", validate_dir, "Scenario directory")->required();

    std::string synth_regime = "default", synth_out;
    std::uint64_t synth_seed = 1;
    auto* synth = app.add_subcommand("synth", "Generate a scenario directory");
    synth->add_option("--regime", synth_regime, "default | optimized");
    synth->add_option("--seed", synth_seed, "Generator seed");
    synth->add_option("--out", synth_out, "Output directory")->required();

    mera::SuiteConfig config;
    std::vector<std::string> suites{"ci"}, strategies, regimes, seeds;
    std::vector<double> lambdas;
    std::string out_dir = "results", scenario_dir;
    std::size_t workers = 0;
    auto* run = app.add_subcommand("run", "Run experiment suites and write CSV results");
    run->add_option("--suite", suites, "exp1 exp2 exp3 exp4 lambda, or ci for all")->delimiter(',');
    run->add_option("--strategy", strategies, "mera baseline greedy (default: all)")->delimiter(',');
    run->add_option("--lambda", lambdas, "MERA cost weight(s); one MERA run per value")->delimiter(',');
    run->add_option("--seed", seeds, "Seeds, e.g. 1-10 or 1,4,7")->delimiter(',');
    run->add_option("--regime", regimes, "default optimized (default: both)")->delimiter(',');
    run->add_option("--scenario", scenario_dir, "Use this scenario directory instead of generated ones");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--workers", workers, "Worker threads (default: MERA_WORKERS or hardware)");
    run->add_option("--iterations", config.max_iterations, "MERA iteration limit");
    run->add_option("--plans", config.plan_count, "Plans per agent");
    run->add_option("--exp2-stride", config.exp2_stride, "Profile step between exp2 windows (1 = every window)");
    run->add_option("--exp2-seeds", config.exp2_seeds, "Number of seeds exp2 runs on");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return cmd_validate(validate_dir);

        if (*synth) {
            auto regime = mera::parse_regime(synth_regime);
            if (!regime) throw std::invalid_argument("unknown regime '" + synth_regime + "'");
            const auto scenario = mera::synthesize(mera::regime_defaults(*regime, synth_seed));
            auto checked = mera::check_scenario(scenario);
            if (!checked.empty()) {
                std::cerr << mera::format_diagnostics(checked);
                return 1;
            }
            std::filesystem::create_directories(synth_out);
            mera::save_scenario(scenario, mera::ScenarioFiles::in(synth_out));
            std::cout << "wrote " << synth_out << "\n";
            return 0;
        }

        config.suites.clear();
        for (const auto& s : suites) {
            if (s == "ci") config.suites.assign(std::begin(mera::known_suites), std::end(mera::known_suites));
            else config.suites.push_back(s);
        }
        if (!strategies.empty()) {
            config.strategies.clear();
            for (const auto& s : strategies) {
                auto k = mera::parse_strategy(s);
                if (!k) throw std::invalid_argument("unknown strategy '" + s + "'");
                config.strategies.push_back(*k);
            }
        }
        if (!regimes.empty()) {
            config.regimes.clear();
            for (const auto& r : regimes) {
                auto k = mera::parse_regime(r);
                if (!k) throw std::invalid_argument("unknown regime '" + r + "'");
                config.regimes.push_back(*k);
            }
        }
        if (!lambdas.empty()) config.lambdas = lambdas;
        if (!seeds.empty()) config.seeds = parse_seed_list(seeds);
        if (!scenario_dir.empty()) config.scenario_dir = scenario_dir;
        config.workers = workers ? workers : mera::configured_workers();

        const auto result = mera::run_suites(config);
        mera::write_results(result, config, out_dir);
        std::cout << "rounds " << result.rounds << ", infeasible " << result.infeasible_rounds
                  << ", non-monotone " << result.nonmonotone_rounds << " -> " << out_dir << "\n";
        return result.invariants_hold() ? 0 : 1;
    } catch (const mera::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
