#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sieverank {

/// Clamped B-spline basis of a given polynomial degree.
///
/// The knot vector has its boundary knots repeated degree+1 times, so the
/// number of basis functions is size() = knots.size() - degree - 1, i.e.
/// (#interior knots) + degree + 1. Evaluation outside [lower(), upper()]
/// clamps the argument to the nearest boundary.
class BSplineBasis {
public:
    BSplineBasis(int degree, std::vector<double> knots);

    int degree() const { return degree_; }
    std::span<const double> knots() const { return knots_; }
    std::size_t size() const { return knots_.size() - static_cast<std::size_t>(degree_) - 1; }
    double lower() const { return knots_.front(); }
    double upper() const { return knots_.back(); }

    /// Value of basis function k at x. Throws ConfigError if k >= size().
    double eval(std::size_t k, double x) const;

    /// Writes the degree+1 possibly non-zero basis values at x into `out` and
    /// returns the index of the first of them.
    std::size_t eval_nonzero(double x, std::span<double> out) const;

    /// Writes all size() basis values at x into `out`.
    void eval_all(double x, std::span<double> out) const;

    bool operator==(const BSplineBasis&) const = default;

private:
    std::size_t find_span(double x) const;

    int degree_;
    std::vector<double> knots_;
};

/// Clamped knot vector with boundary knots at min/max of `data` and
/// `n_interior` interior knots at the empirical quantiles j/(n_interior+1).
/// Quantiles use the inverse empirical CDF (lower order statistic).
/// Throws DataError for empty or constant data.
std::vector<double> make_knot_vector(std::span<const double> data, int degree, int n_interior);

/// Free-function form of BSplineBasis::eval.
double bspline_eval(const BSplineBasis& basis, std::size_t k, double x);

}  // namespace sieverank
