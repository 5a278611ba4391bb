#include "mera/objectives.hpp"

#include <cmath>
#include <stdexcept>

namespace mera {

const char* to_string(Objective o) {
    return o == Objective::incentive ? "incentive" : "min-var";
}

std::optional<Objective> parse_objective(const std::string& s) {
    if (s == "min-var") return Objective::min_var;
    if (s == "incentive") return Objective::incentive;
    return std::nullopt;
}

namespace {

bool included(const std::vector<char>& mask, std::size_t node) {
    return mask.empty() || mask[node];
}

} // namespace

double variance_objective(const UtilizationVector& g, const std::vector<char>& mask) {
    const std::size_t n = g.size() / 2;
    double mean_p = 0.0, mean_m = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!included(mask, j)) continue;
        mean_p += g[2 * j];
        mean_m += g[2 * j + 1];
        ++count;
    }
    if (count == 0) return 0.0;
    mean_p /= count;
    mean_m /= count;
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!included(mask, j)) continue;
        double dp = g[2 * j] - mean_p;
        double dm = g[2 * j + 1] - mean_m;
        ss += dp * dp + dm * dm;
    }
    return std::sqrt(ss / (2.0 * count));
}

double incentive_objective(const UtilizationVector& g, const UtilizationVector& target,
                           const std::vector<char>& mask) {
    if (g.size() != target.size()) throw std::invalid_argument("incentive_objective: dimension mismatch");
    const std::size_t n = g.size() / 2;
    double ss = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!included(mask, j)) continue;
        double dp = g[2 * j] - target[2 * j];
        double dm = g[2 * j + 1] - target[2 * j + 1];
        ss += dp * dp + dm * dm;
        ++count;
    }
    if (count == 0) return 0.0;
    return std::sqrt(ss / (2.0 * count));
}

UtilizationVector incentive_target(const std::vector<Node>& nodes) {
    UtilizationVector t(2 * nodes.size(), 0.0);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        t[2 * j] = nodes[j].renewable_ratio;
        t[2 * j + 1] = nodes[j].renewable_ratio;
    }
    return t;
}

std::vector<char> active_mask(const std::vector<Node>& nodes) {
    std::vector<char> mask(nodes.size(), 0);
    for (std::size_t j = 0; j < nodes.size(); ++j) mask[j] = nodes[j].active ? 1 : 0;
    return mask;
}

double GlobalObjective::operator()(const UtilizationVector& g) const {
    if (kind == Objective::incentive) return incentive_objective(g, target, mask);
    return variance_objective(g, mask);
}

GlobalObjective make_global_objective(Objective kind, const std::vector<Node>& nodes) {
    GlobalObjective o;
    o.kind = kind;
    o.mask = active_mask(nodes);
    if (kind == Objective::incentive) o.target = incentive_target(nodes);
    return o;
}

namespace {

constexpr double degenerate_range = 1e-12;

double scale(double v, double lo, double hi) {
    double range = hi - lo;
    if (!(range > degenerate_range)) range = 1.0;
    return (v - lo) / range;
}

} // namespace

double Normalizer::local(double mean_local_cost) const { return scale(mean_local_cost, local_min, local_max); }

double Normalizer::global(double global_cost) const { return scale(global_cost, global_min, global_max); }

double combined_cost(const std::vector<double>& local_costs, const UtilizationVector& g, double lambda,
                     const Normalizer& normalizer, const GlobalObjective& objective) {
    double mean = 0.0;
    for (double c : local_costs) mean += c;
    if (!local_costs.empty()) mean /= static_cast<double>(local_costs.size());
    return combined_cost(lambda, normalizer.local(mean), normalizer.global(objective(g)));
}

} // namespace mera
