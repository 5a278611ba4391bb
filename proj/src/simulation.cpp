#include "mera/simulation.hpp"

#include <algorithm>

#include "mera/baselines.hpp"
#include "mera/mobility.hpp"
#include "mera/rng.hpp"

namespace mera {

const char* to_string(Strategy s) {
    switch (s) {
    case Strategy::mera: return "mera";
    case Strategy::baseline: return "baseline";
    case Strategy::greedy: return "greedy";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(const std::string& s) {
    if (s == "mera") return Strategy::mera;
    if (s == "baseline") return Strategy::baseline;
    if (s == "greedy") return Strategy::greedy;
    return std::nullopt;
}

RoundState build_round(const ValidatedScenario& scenario, const RoundSpec& spec, const PlacementMap& previous,
                       const std::vector<Node>& nodes, double utilization_cap) {
    const Scenario& sc = scenario.scenario;
    RoundState st;
    st.round_index = spec.round_index;
    st.profile_index = spec.profile_index;
    st.slot_length = sc.settings.slot_length;
    st.nodes = nodes;
    st.apply_startup_delay = spec.apply_startup_delay;
    st.startup_delay = sc.settings.startup_delay;
    st.utilization_cap = utilization_cap;

    static const std::vector<MobilityTrace> no_traces;
    const auto& traces = spec.mobility_round < sc.traces.size() ? sc.traces[spec.mobility_round] : no_traces;
    static const std::unordered_map<std::string, double> no_rates;
    const auto& rates = spec.profile_index >= 0 && static_cast<std::size_t>(spec.profile_index) < sc.iot_profiles.size()
                            ? sc.iot_profiles[spec.profile_index]
                            : no_rates;

    std::unordered_map<std::string, const MobilityTrace*> by_vehicle;
    for (const auto& t : traces) by_vehicle.emplace(t.vehicle, &t);

    std::vector<const Service*> chosen;
    for (const auto& s : sc.services) {
        if (!by_vehicle.count(s.vehicle)) continue;
        auto r = rates.find(s.id);
        if (r == rates.end() || !(r->second > 0.0)) continue;
        chosen.push_back(&s);
    }
    std::sort(chosen.begin(), chosen.end(), [](const Service* a, const Service* b) { return a->id < b->id; });

    const ApIndex fallback = sc.topology.find_ap(sc.settings.fallback_ap).value_or(0);
    for (const Service* s : chosen) {
        Service sv = *s;
        sv.arrival_rate = rates.at(s->id);
        const MobilityTrace& tr = *by_vehicle.at(s->vehicle);
        auto cov = vehicle_coverage(tr, sc.topology, st.slot_length);
        st.dominant_ap.push_back(dominant_ap(cov, fallback));
        st.coverage.push_back(std::move(cov));
        st.traces.push_back(tr);
        if (auto p = previous.find(sv.id); p != previous.end()) st.previous_placement.emplace(sv.id, p->second);
        st.services.push_back(std::move(sv));
    }
    return st;
}

namespace {

// Merging every agent's selection can overfill a host, since each agent
// planned against the unloaded network. Selections that no longer fit are
// moved, in service order, to the fitting fog candidate that leaves the
// global objective lowest, or to the cloud when no fog fits.
std::size_t reconcile(const CostModel& model, const GlobalObjective& objective, int hop_radius, Assignment& a,
                      std::size_t& relocated) {
    const RoundState& st = model.state();
    std::vector<std::size_t> order(a.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a.services[x] < a.services[y]; });
    std::vector<HostLoad> load(st.nodes.size());
    UtilizationVector g = model.utilization(a);
    UtilizationVector own(g.size(), 0.0);
    auto shift = [&](ServiceIndex i, NodeIndex j, double sign) {
        std::fill(own.begin(), own.end(), 0.0);
        model.add_utilization(i, j, own);
        for (std::size_t e = 0; e < g.size(); ++e) g[e] += sign * own[e];
    };
    std::size_t spilled = 0;
    for (std::size_t k : order) {
        const ServiceIndex i = a.services[k];
        const Service& s = st.services[i];
        NodeIndex j = a.hosts[k];
        if (!fits(st.nodes[j], load[j], s, st.utilization_cap)) {
            shift(i, j, -1.0);
            NodeIndex best = no_index;
            double best_value = 0.0;
            for (NodeIndex c : candidate_hosts(model, i, hop_radius)) {
                if (st.nodes[c].is_cloud() || !fits(st.nodes[c], load[c], s, st.utilization_cap)) continue;
                shift(i, c, 1.0);
                const double v = objective(g);
                shift(i, c, -1.0);
                if (best == no_index || v < best_value) {
                    best = c;
                    best_value = v;
                }
            }
            if (best == no_index) {
                best = spill_cloud(model, i);
                ++spilled;
            } else {
                ++relocated;
            }
            j = best;
            a.hosts[k] = j;
            shift(i, j, 1.0);
        }
        load[j].add(s);
    }
    return spilled;
}

Assignment run_mera(const CostModel& model, const StrategySettings& settings, std::uint64_t seed, RoundOutcome& out) {
    const RoundState& st = model.state();
    const auto fogs = st.active_fogs();
    if (fogs.empty()) {
        // Nothing to coordinate: everything goes to the cloud.
        Assignment a;
        for (ServiceIndex i = 0; i < st.services.size(); ++i) a.push(i, spill_cloud(model, i));
        return a;
    }
    std::vector<std::string> ids;
    std::vector<std::size_t> agent_of(st.nodes.size(), no_index);
    for (std::size_t k = 0; k < fogs.size(); ++k) {
        ids.push_back(st.nodes[fogs[k]].id);
        agent_of[fogs[k]] = k;
    }
    std::vector<std::vector<ServiceIndex>> received(fogs.size());
    for (ServiceIndex i = 0; i < st.services.size(); ++i) {
        NodeIndex r = receiving_fog(model.scenario(), st, i);
        std::size_t k = r == no_index ? 0 : agent_of[r];
        received[k].push_back(i);
    }

    const std::uint64_t round_seed = mix_seed({seed, static_cast<std::uint64_t>(st.round_index), 0x3e7aULL});
    std::vector<std::vector<PlacementPlan>> plans(fogs.size());
    std::vector<AgentPlans> summaries(fogs.size());
    for (std::size_t k = 0; k < fogs.size(); ++k) {
        PlanOptions po = settings.plans;
        po.seed = round_seed;
        plans[k] = generate_plans(ids[k], received[k], model, po);
        summaries[k] = summarize(plans[k]);
    }

    GlobalObjective objective = make_global_objective(settings.objective, st.nodes);
    TreeOverlay tree = build_tree(ids, settings.branching, round_seed);
    OptimizerOptions oo;
    oo.lambda = settings.lambda;
    oo.max_iterations = settings.max_iterations;
    OptimizationResult res = optimize(summaries, tree, objective, oo);
    out.iterations = res.iterations;
    for (std::size_t t = 1; t < res.iterations.size(); ++t)
        if (res.iterations[t].combined_cost > res.iterations[t - 1].combined_cost) out.monotone = false;

    Assignment a;
    for (std::size_t k = 0; k < fogs.size(); ++k) {
        const Assignment& chosen = plans[k][res.selections[k]].assignment;
        for (std::size_t s = 0; s < chosen.size(); ++s) a.push(chosen.services[s], chosen.hosts[s]);
    }
    out.spilled = reconcile(model, objective, settings.plans.hop_radius, a, out.relocated);
    return a;
}

} // namespace

RoundOutcome run_strategy(const ValidatedScenario& scenario, const RoundState& state,
                          const StrategySettings& settings, std::uint64_t seed) {
    RoundOutcome out;
    out.services = state.services.size();
    CostModel model(scenario, state);
    Assignment a;
    switch (settings.kind) {
    case Strategy::mera: a = run_mera(model, settings, seed, out); break;
    case Strategy::baseline: a = baseline_place(model); break;
    case Strategy::greedy: a = greedy_place(model); break;
    }
    out.cost = model.evaluate(a);
    out.utilization = model.utilization(a);
    const auto mask = active_mask(state.nodes);
    out.variance = variance_objective(out.utilization, mask);
    out.incentive = incentive_objective(out.utilization, incentive_target(state.nodes), mask);
    out.violations = feasibility_check(a, state.nodes, state.services, state.utilization_cap);
    out.active_fog.resize(state.nodes.size());
    for (std::size_t j = 0; j < state.nodes.size(); ++j)
        out.active_fog[j] = state.nodes[j].active && !state.nodes[j].is_cloud();
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (state.nodes[a.hosts[k]].is_cloud()) ++out.cloud_hosted;
        out.placement[state.services[a.services[k]].id] = a.hosts[k];
    }
    out.assignment = std::move(a);
    return out;
}

std::vector<RoundOutcome> run_horizon(const ValidatedScenario& scenario, const HorizonSpec& horizon,
                                      const StrategySettings& settings, std::uint64_t seed) {
    std::vector<RoundOutcome> out;
    PlacementMap previous;
    for (const auto& spec : horizon.rounds) {
        RoundState st;
        if (horizon.configure) {
            // Node configuration depends on the round's demand, so build twice.
            RoundState probe = build_round(scenario, spec, previous, scenario.scenario.topology.nodes,
                                           horizon.utilization_cap);
            st = build_round(scenario, spec, previous, horizon.configure(probe.services), horizon.utilization_cap);
        } else {
            st = build_round(scenario, spec, previous, scenario.scenario.topology.nodes, horizon.utilization_cap);
        }
        out.push_back(run_strategy(scenario, st, settings, seed));
        previous = out.back().placement;
    }
    return out;
}

std::vector<RoundSpec> profile_rounds(std::size_t first_profile, std::size_t profiles, int rounds_per_profile,
                                      std::size_t mobility_rounds) {
    std::vector<RoundSpec> out;
    const std::size_t total = profiles * static_cast<std::size_t>(rounds_per_profile);
    for (std::size_t r = 0; r < total; ++r) {
        RoundSpec s;
        s.round_index = static_cast<int>(r);
        s.profile_index = static_cast<int>(first_profile + r / rounds_per_profile);
        s.mobility_round = mobility_rounds > 0 ? r % mobility_rounds : r;
        s.apply_startup_delay = r == 0;
        out.push_back(s);
    }
    return out;
}

} // namespace mera
