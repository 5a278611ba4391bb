#pragma once

#include <vector>

namespace mera::stats {

double mean(const std::vector<double>& v);
double stddev(const std::vector<double>& v); // population
double coefficient_of_variation(const std::vector<double>& v);

// Fractional ranks (1-based), ties share their average rank.
std::vector<double> ranks(const std::vector<double>& v);
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Gini coefficient of non-negative values (0 = perfectly even).
double gini(std::vector<double> v);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace mera::stats
