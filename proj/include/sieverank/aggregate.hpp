#pragma once

#include <optional>
#include <vector>

#include "sieverank/matrix.hpp"

namespace sieverank {

/// Local estimates g_w evaluated on a common grid, one row per control value.
struct LocalEstimateSet {
    Matrix grid;                                // grid points, one per row
    Matrix curves;                              // n_w x grid.rows()
    std::vector<double> w_draws;                // control value behind each curve
    std::optional<std::vector<double>> weights;  // non-negative, sums to 1; uniform if absent

    /// Throws ConfigError on inconsistent shapes or invalid weights.
    void validate() const;
};

/// Pointwise weighted mean (the minimizer of the weighted squared loss).
std::vector<double> aggregate_ls(const LocalEstimateSet& set);

/// Pointwise weighted median (the minimizer of the weighted absolute loss).
/// When the minimizing set is an interval, its midpoint is returned.
std::vector<double> aggregate_lad(const LocalEstimateSet& set);

/// Weighted median of `values`; empty `weights` means uniform.
double weighted_median(std::vector<double> values, const std::vector<double>& weights);

}  // namespace sieverank
