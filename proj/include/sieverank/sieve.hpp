#pragma once

// Additive sieve spaces: phi(z) = sum of components, each either a scalar
// regressor term (optionally pinned to a fixed coefficient) or a B-spline
// expansion of one regressor or of a product of two regressors.

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sieverank/bspline.hpp"
#include "sieverank/matrix.hpp"

namespace sieverank {

/// Which scalar input a component reads from a regressor vector z.
struct RegressorSelector {
    enum class Kind { Coordinate, Product };

    Kind kind = Kind::Coordinate;
    std::size_t first = 0;
    std::size_t second = 0;  // only used by Product

    static RegressorSelector coordinate(std::size_t i) { return {Kind::Coordinate, i, 0}; }
    static RegressorSelector product(std::size_t i, std::size_t j) { return {Kind::Product, i, j}; }

    /// Throws ConfigError if z is too short.
    double value(std::span<const double> z) const;
    std::size_t required_dim() const;

    bool operator==(const RegressorSelector&) const = default;
};

/// coefficient * input. A pinned term adds a fixed offset (the scale
/// normalization of an additive model); an unpinned one contributes one free
/// coefficient.
struct IdentityComponent {
    RegressorSelector input;
    double coefficient = 1.0;
    bool pinned = true;

    bool operator==(const IdentityComponent&) const = default;
};

/// B-spline expansion of the input. With intercept == false the first basis
/// function is dropped, leaving size()-1 free coefficients; the span then
/// excludes constants, which the rank criterion cannot see anyway.
struct SplineComponent {
    RegressorSelector input;
    BSplineBasis basis;
    bool intercept = true;

    std::size_t free_count() const { return basis.size() - (intercept ? 0 : 1); }

    bool operator==(const SplineComponent&) const = default;
};

using Component = std::variant<IdentityComponent, SplineComponent>;

struct AnchorNormalization {
    std::vector<double> point;
    double value = 0.0;

    bool operator==(const AnchorNormalization&) const = default;
};

struct TwoPointNormalization {
    std::vector<double> first_point;
    double first_value = 0.0;
    std::vector<double> second_point;
    double second_value = 1.0;

    bool operator==(const TwoPointNormalization&) const = default;
};

using Normalization = std::variant<std::monostate, AnchorNormalization, TwoPointNormalization>;

struct DesignRow {
    std::vector<double> row;  // one entry per free coefficient
    double offset = 0.0;      // contribution of pinned components
};

/// A realized sieve space: every spline component carries its knots.
class SieveSpec {
public:
    SieveSpec() = default;
    SieveSpec(std::vector<Component> components, Normalization normalization = {});

    const std::vector<Component>& components() const { return components_; }
    const Normalization& normalization() const { return normalization_; }
    std::size_t free_count() const { return free_count_; }
    /// Smallest regressor dimension accepted by design_row.
    std::size_t required_dim() const { return required_dim_; }

    /// phi(z) = offset + row . coefficients.
    DesignRow design_row(std::span<const double> z) const;
    /// Allocation-free variant; row.size() must equal free_count().
    double design_row(std::span<const double> z, std::span<double> row) const;

    /// Un-normalized phi(z) for a coefficient vector.
    double evaluate(std::span<const double> z, std::span<const double> coefficients) const;

    bool operator==(const SieveSpec&) const = default;

private:
    std::vector<Component> components_;
    Normalization normalization_;
    std::size_t free_count_ = 0;
    std::size_t required_dim_ = 0;
};

/// Spline component whose knots are placed from data at realization time,
/// unless explicit knots are given.
struct SplineTemplate {
    RegressorSelector input;
    int degree = 3;
    int n_interior = 0;
    bool intercept = true;
    std::optional<std::vector<double>> knots;

    bool operator==(const SplineTemplate&) const = default;
};

using ComponentTemplate = std::variant<IdentityComponent, SplineTemplate>;

/// Sieve space description before data is seen (the JSON-level object).
struct SieveTemplate {
    std::vector<ComponentTemplate> components;
    Normalization normalization;

    bool operator==(const SieveTemplate&) const = default;
};

/// Places knots for every data-driven spline from the rows of z.
SieveSpec realize(const SieveTemplate& tmpl, const Matrix& z);

/// Drops realized knots so the result re-fits knots on new data.
SieveTemplate to_template(const SieveSpec& spec);

/// Column-major design block for a set of rows of z, ready for
/// kernels::affine_columns.
struct DesignMatrix {
    std::size_t rows = 0;
    std::size_t free = 0;
    std::vector<double> columns;  // free x rows, column k at [k*rows, (k+1)*rows)
    std::vector<double> offset;   // rows

    std::span<const double> column(std::size_t k) const {
        return {columns.data() + k * rows, rows};
    }
};

DesignMatrix build_design(const SieveSpec& spec, const Matrix& z);
DesignMatrix build_design(const SieveSpec& spec, const Matrix& z, std::span<const std::size_t> rows);

/// A member of a sieve space: phi(z) = scale * (raw phi(z)) + shift.
struct PhiEstimate {
    SieveSpec spec;
    std::vector<double> coefficients;
    double criterion_value = 0.0;
    double scale = 1.0;
    double shift = 0.0;
    bool degenerate = false;

    double operator()(std::span<const double> z) const;
};

/// Applies spec.normalization() to the estimate. Idempotent.
/// Throws NumericalError for a two-point rule on a function that takes the
/// same value at both points.
PhiEstimate apply_normalization(PhiEstimate estimate);

}  // namespace sieverank
