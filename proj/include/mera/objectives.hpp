#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mera/model.hpp"

namespace mera {

// Dense per-node CPU/RAM utilisation: [cpu_0, ram_0, cpu_1, ram_1, ...].
using UtilizationVector = std::vector<double>;

enum class Objective { min_var, incentive };

const char* to_string(Objective o);
std::optional<Objective> parse_objective(const std::string& s);

// RMS deviation of CPU and RAM shares from their per-dimension means over
// the nodes flagged in `mask` (all nodes when empty).
double variance_objective(const UtilizationVector& g, const std::vector<char>& mask = {});

// RMS distance between utilisation and a per-entry target vector.
double incentive_objective(const UtilizationVector& g, const UtilizationVector& target,
                           const std::vector<char>& mask = {});

// Renewable-share target, repeated for the CPU and RAM entries of each node.
UtilizationVector incentive_target(const std::vector<Node>& nodes);

// Active-node mask in node order.
std::vector<char> active_mask(const std::vector<Node>& nodes);

/// Global cost function sigma(g) as configured for a run.
struct GlobalObjective {
    Objective kind = Objective::min_var;
    UtilizationVector target;
    std::vector<char> mask;

    double operator()(const UtilizationVector& g) const;
};

GlobalObjective make_global_objective(Objective kind, const std::vector<Node>& nodes);

/// Min-max scaling of the mean local cost and of the global cost, fitted
/// once per decision round.
struct Normalizer {
    double local_min = 0.0;
    double local_max = 1.0;
    double global_min = 0.0;
    double global_max = 1.0;

    double local(double mean_local_cost) const;
    double global(double global_cost) const;
};

inline double combined_cost(double lambda, double local_normalized, double global_normalized) {
    return lambda * local_normalized + (1.0 - lambda) * global_normalized;
}

// lambda * L^ + (1 - lambda) * G^ with L the mean of the selected local costs.
double combined_cost(const std::vector<double>& local_costs, const UtilizationVector& g, double lambda,
                     const Normalizer& normalizer, const GlobalObjective& objective);

} // namespace mera
