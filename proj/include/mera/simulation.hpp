#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mera/collective.hpp"
#include "mera/cost.hpp"
#include "mera/objectives.hpp"
#include "mera/plan.hpp"
#include "mera/validate.hpp"

namespace mera {

enum class Strategy { mera, baseline, greedy };

const char* to_string(Strategy s);
std::optional<Strategy> parse_strategy(const std::string& s);

struct StrategySettings {
    Strategy kind = Strategy::mera;
    Objective objective = Objective::min_var;
    double lambda = 0.5;
    std::size_t branching = 2;
    int max_iterations = 40;
    PlanOptions plans;
};

// Which inputs feed one decision round.
struct RoundSpec {
    int round_index = 0;
    int profile_index = 0;
    std::size_t mobility_round = 0;
    bool apply_startup_delay = false;
};

// Round inputs over the given effective node set. Services are the catalog
// entries whose vehicle appears in the mobility round and whose profile
// rate is positive, ordered by id.
RoundState build_round(const ValidatedScenario& scenario, const RoundSpec& spec, const PlacementMap& previous,
                       const std::vector<Node>& nodes, double utilization_cap);

struct RoundOutcome {
    Assignment assignment;
    CostBreakdown cost;
    UtilizationVector utilization;
    double variance = 0.0;
    double incentive = 0.0;
    std::size_t services = 0;
    std::size_t cloud_hosted = 0;
    std::size_t spilled = 0;        // MERA selections moved to the cloud on reconciliation
    std::size_t relocated = 0;      // MERA selections moved to another fog on reconciliation
    std::vector<IterationRecord> iterations;
    bool monotone = true;           // combined cost never rose across iterations
    std::vector<FeasibilityViolation> violations;
    PlacementMap placement;         // service id -> host, for the next round
    std::vector<char> active_fog;   // node order: fog switched on this round
};

// Runs one strategy on one round. `seed` drives plan diversification and
// the tree overlay.
RoundOutcome run_strategy(const ValidatedScenario& scenario, const RoundState& state,
                          const StrategySettings& settings, std::uint64_t seed);

// Effective node configuration for a round, given its services.
using NodeConfigurator = std::function<std::vector<Node>(const std::vector<Service>& round_services)>;

struct HorizonSpec {
    std::vector<RoundSpec> rounds;
    double utilization_cap = 0.9;
    NodeConfigurator configure; // empty: topology nodes as-is
};

// Consecutive rounds with the previous placement threaded through.
std::vector<RoundOutcome> run_horizon(const ValidatedScenario& scenario, const HorizonSpec& horizon,
                                      const StrategySettings& settings, std::uint64_t seed);

// Rounds feeding `profiles` consecutive IoT profiles from `first_profile`,
// `rounds_per_profile` each, mobility rounds counting up from zero.
std::vector<RoundSpec> profile_rounds(std::size_t first_profile, std::size_t profiles, int rounds_per_profile,
                                      std::size_t mobility_rounds);

} // namespace mera
