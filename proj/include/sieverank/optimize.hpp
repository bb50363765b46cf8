#pragma once

#include <cstdint>
#include <vector>

#include "sieverank/matrix.hpp"
#include "sieverank/rank.hpp"
#include "sieverank/sample.hpp"
#include "sieverank/sieve.hpp"

namespace sieverank {

struct OptimizerConfig {
    int n_starts = 20;
    int max_iters = 1000;     // Nelder-Mead iterations per start
    double init_scale = 1.0;  // starts drawn uniformly from [-init_scale, init_scale]^K
    double ftol = 1e-10;
    double xtol = 1e-6;
    std::uint64_t seed = 0;

    /// Throws ConfigError if any field is non-positive.
    void validate() const;
};

/// Sieve rank estimator: maximizes the selected rank criterion over the free
/// coefficients of `spec` with multi-start Nelder-Mead, then normalizes.
///
/// Starts are independent and seeded from (cfg.seed, start index). Among
/// starts reaching the same criterion value the one with the smallest
/// coefficient norm wins, then the lowest start index. If no start beats the
/// all-zero coefficient vector, that vector is returned with `degenerate` set.
///
/// Throws ConfigError if the spec has no free coefficients and DataError if
/// the selected cell or window holds fewer than two observations.
PhiEstimate maximize_rank_criterion(const Sample& sample, const SieveSpec& spec,
                                    const CriterionSelector& selector, const OptimizerConfig& cfg);

/// Same, for a criterion already bound to `sample`.
PhiEstimate maximize_rank_criterion(const PreparedCriterion& criterion, const Sample& sample,
                                    const SieveSpec& spec, const OptimizerConfig& cfg);

/// Least-squares series regression of y on the sieve design (pinned terms
/// moved to the response), ignoring any measurement error. An intercept
/// column is added unless a full-basis spline component already spans
/// constants. criterion_value holds the mean squared residual.
/// Throws NumericalError naming the dependent columns if the design is
/// rank deficient.
PhiEstimate series_ols(const Sample& sample, const SieveSpec& spec);

/// Normalized phi at each row of `grid`.
std::vector<double> evaluate_on_grid(const PhiEstimate& estimate, const Matrix& grid);

}  // namespace sieverank
