#pragma once

// Rank-based criteria. For a candidate index function phi evaluated at the
// sample points, every variant sums y_i over ordered pairs (i, j), i != j,
// with phi_i > phi_j, possibly weighted by kernels on the controls W:
//
//   full        (1/(n(n-1))) sum_i y_i Rank(phi_i)
//   discrete-w  full criterion on the cell {W_i = w0}, normalized by m(m-1)
//   weighted    (1/(n(n-1))) sum K_s(W_i-w0) y_i K_s(W_j-w0) 1{phi_i > phi_j}
//   pairwise    (1/(n(n-1))) sum y_i K_s(W_i-W_j) 1{phi_i > phi_j}
//
// All variants depend on phi only through strict comparisons, so any strictly
// increasing transform of phi leaves them bit-for-bit unchanged.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sieverank/sample.hpp"

namespace sieverank {

enum class KernelFamily { Uniform, Gaussian, Epanechnikov };

std::string_view kernel_family_name(KernelFamily family);
/// Throws ConfigError for an unknown name.
KernelFamily parse_kernel_family(std::string_view name);

struct KernelSpec {
    KernelFamily family = KernelFamily::Uniform;
    std::vector<double> bandwidths;  // one per control dimension, all > 0

    /// Throws ConfigError unless there are `dim` positive bandwidths.
    void validate(std::size_t dim) const;
};

/// Univariate kernel K(u): uniform 1{|u|<1}, standard normal density, or
/// Epanechnikov 0.75(1-u^2) on |u|<1.
double kernel_value(KernelFamily family, double u);

/// Product kernel prod_l K((w_i[l] - w0[l]) / s_l).
double kernel_weight(const KernelSpec& spec, std::span<const double> w_i, std::span<const double> w0);

/// out[i] = #{ j != i : values[j] < values[i] }, in O(n log n).
std::vector<std::int64_t> rank_strict_less(std::span<const double> values);

/// Full-sample criterion. Throws DataError if n < 2.
double rank_criterion(const Sample& sample, std::span<const double> phi);

struct CriterionValue {
    double value = 0.0;
    bool empty = false;  // cell/window held fewer than two observations
};

CriterionValue rank_criterion_discrete_w(const Sample& sample, std::span<const double> phi,
                                         std::span<const double> w0);

CriterionValue rank_criterion_weighted(const Sample& sample, std::span<const double> phi,
                                       std::span<const double> w0, const KernelSpec& spec);

double rank_criterion_pairwise(const Sample& sample, std::span<const double> phi,
                               const KernelSpec& spec);

enum class CriterionKind { Full, DiscreteW, Weighted, Pairwise };

std::string_view criterion_kind_name(CriterionKind kind);
CriterionKind parse_criterion_kind(std::string_view name);

struct CriterionSelector {
    CriterionKind kind = CriterionKind::Full;
    std::vector<double> w0;  // DiscreteW, Weighted
    KernelSpec kernel;       // Weighted, Pairwise
    /// Weighted + uniform kernel: evaluate as a rank sum over the in-window
    /// subsample. When false the generic kernel-weighted path is used.
    bool window_fast_path = true;
};

/// A criterion bound to one sample. Everything that does not depend on phi
/// (cell membership, kernel weights, pair weights) is computed once here,
/// so repeated evaluation inside an optimizer only sorts and sums.
///
/// Evaluation takes phi on the active rows only, in the order of rows().
/// Instances are immutable after construction; scratch space is per thread.
class PreparedCriterion {
public:
    PreparedCriterion(const Sample& sample, CriterionSelector selector);

    const CriterionSelector& selector() const { return selector_; }
    std::span<const std::size_t> rows() const { return rows_; }
    /// True when a cell or window variant has fewer than two active rows.
    bool empty() const { return empty_; }

    double operator()(std::span<const double> phi_active) const;

private:
    double pairwise_row_sum(std::size_t i, std::span<const double> phi) const;

    CriterionSelector selector_;
    std::vector<std::size_t> rows_;
    std::vector<double> a_;  // per-row multiplier of the "greater" side
    std::vector<double> b_;  // per-row weight of the "smaller" side, empty = all ones
    std::vector<double> pair_weights_;  // pairwise: dense n x n, zero diagonal
    Matrix w_;                          // pairwise fallback for large n
    double normalizer_ = 1.0;
    bool empty_ = false;
};

}  // namespace sieverank
