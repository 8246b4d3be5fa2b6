#pragma once

#include <span>
#include <vector>

namespace dramatis {

// Empirical quantile with linear interpolation between order statistics
// (R type 7). Input must be sorted ascending and non-empty; q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

// Median of an unsorted sample (copies and sorts).
double median(std::span<const double> values);

// Spearman rank correlation with average ranks for ties.
// Both spans must have the same size >= 2.
double spearman_rho(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based) with ties sharing their mean rank.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace dramatis
