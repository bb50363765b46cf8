#include "sieverank/sieve.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "sieverank/errors.hpp"

namespace sieverank {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double RegressorSelector::value(std::span<const double> z) const {
    if (z.size() < required_dim()) {
        throw ConfigError("regressor index out of range: selector needs dimension " +
                          std::to_string(required_dim()) + ", got " + std::to_string(z.size()));
    }
    return kind == Kind::Coordinate ? z[first] : z[first] * z[second];
}

std::size_t RegressorSelector::required_dim() const {
    return kind == Kind::Coordinate ? first + 1 : std::max(first, second) + 1;
}

SieveSpec::SieveSpec(std::vector<Component> components, Normalization normalization)
    : components_(std::move(components)), normalization_(std::move(normalization)) {
    for (const auto& c : components_) {
        std::visit(Overloaded{
                       [&](const IdentityComponent& id) {
                           if (!id.pinned) ++free_count_;
                           required_dim_ = std::max(required_dim_, id.input.required_dim());
                       },
                       [&](const SplineComponent& sp) {
                           if (!sp.intercept && sp.basis.size() < 2) {
                               throw ConfigError("spline without intercept needs at least two basis functions");
                           }
                           free_count_ += sp.free_count();
                           required_dim_ = std::max(required_dim_, sp.input.required_dim());
                       },
                   },
                   c);
    }
}

double SieveSpec::design_row(std::span<const double> z, std::span<double> row) const {
    double offset = 0.0;
    std::size_t pos = 0;
    std::array<double, 64> buf{};
    for (const auto& c : components_) {
        if (const auto* id = std::get_if<IdentityComponent>(&c)) {
            const double x = id->input.value(z);
            if (id->pinned) {
                offset += id->coefficient * x;
            } else {
                row[pos++] = x;
            }
            continue;
        }
        const auto& sp = std::get<SplineComponent>(c);
        const double x = sp.input.value(z);
        const auto order = static_cast<std::size_t>(sp.basis.degree()) + 1;
        if (order > buf.size()) throw ConfigError("B-spline degree too large");
        const std::size_t first = sp.basis.eval_nonzero(x, std::span<double>(buf.data(), order));
        const std::size_t skip = sp.intercept ? 0 : 1;
        const std::size_t count = sp.free_count();
        std::fill(row.begin() + static_cast<std::ptrdiff_t>(pos),
                  row.begin() + static_cast<std::ptrdiff_t>(pos + count), 0.0);
        for (std::size_t r = 0; r < order; ++r) {
            const std::size_t k = first + r;
            if (k >= skip) row[pos + k - skip] = buf[r];
        }
        pos += count;
    }
    return offset;
}

DesignRow SieveSpec::design_row(std::span<const double> z) const {
    DesignRow out;
    out.row.assign(free_count_, 0.0);
    out.offset = design_row(z, out.row);
    return out;
}

double SieveSpec::evaluate(std::span<const double> z, std::span<const double> coefficients) const {
    if (coefficients.size() != free_count_) {
        throw ConfigError("coefficient vector has length " + std::to_string(coefficients.size()) +
                          ", sieve has " + std::to_string(free_count_) + " free coefficients");
    }
    std::vector<double> row(free_count_);
    double value = design_row(z, row);
    for (std::size_t k = 0; k < free_count_; ++k) value += row[k] * coefficients[k];
    return value;
}

SieveSpec realize(const SieveTemplate& tmpl, const Matrix& z) {
    std::vector<Component> components;
    components.reserve(tmpl.components.size());
    for (const auto& c : tmpl.components) {
        if (const auto* id = std::get_if<IdentityComponent>(&c)) {
            components.emplace_back(*id);
            continue;
        }
        const auto& st = std::get<SplineTemplate>(c);
        if (st.knots) {
            components.emplace_back(SplineComponent{st.input, BSplineBasis(st.degree, *st.knots), st.intercept});
            continue;
        }
        if (z.cols() < st.input.required_dim()) {
            throw ConfigError("spline input needs regressor dimension " +
                              std::to_string(st.input.required_dim()) + ", data has " +
                              std::to_string(z.cols()));
        }
        std::vector<double> values(z.rows());
        for (std::size_t i = 0; i < z.rows(); ++i) values[i] = st.input.value(z.row(i));
        components.emplace_back(SplineComponent{
            st.input, BSplineBasis(st.degree, make_knot_vector(values, st.degree, st.n_interior)),
            st.intercept});
    }
    return SieveSpec(std::move(components), tmpl.normalization);
}

SieveTemplate to_template(const SieveSpec& spec) {
    SieveTemplate out;
    out.normalization = spec.normalization();
    for (const auto& c : spec.components()) {
        if (const auto* id = std::get_if<IdentityComponent>(&c)) {
            out.components.emplace_back(*id);
            continue;
        }
        const auto& sp = std::get<SplineComponent>(c);
        const auto knots = sp.basis.knots();
        const int n_interior =
            static_cast<int>(knots.size()) - 2 * (sp.basis.degree() + 1);
        out.components.emplace_back(SplineTemplate{sp.input, sp.basis.degree(), n_interior, sp.intercept, std::nullopt});
    }
    return out;
}

DesignMatrix build_design(const SieveSpec& spec, const Matrix& z, std::span<const std::size_t> rows) {
    DesignMatrix d;
    d.rows = rows.size();
    d.free = spec.free_count();
    d.columns.assign(d.rows * d.free, 0.0);
    d.offset.assign(d.rows, 0.0);
    std::vector<double> row(d.free);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        d.offset[r] = spec.design_row(z.row(rows[r]), row);
        for (std::size_t k = 0; k < d.free; ++k) d.columns[k * d.rows + r] = row[k];
    }
    return d;
}

DesignMatrix build_design(const SieveSpec& spec, const Matrix& z) {
    std::vector<std::size_t> rows(z.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return build_design(spec, z, rows);
}

double PhiEstimate::operator()(std::span<const double> z) const {
    return scale * spec.evaluate(z, coefficients) + shift;
}

PhiEstimate apply_normalization(PhiEstimate estimate) {
    if (estimate.coefficients.size() != estimate.spec.free_count()) {
        throw ConfigError("estimate has " + std::to_string(estimate.coefficients.size()) +
                          " coefficients, sieve expects " + std::to_string(estimate.spec.free_count()));
    }
    const auto& norm = estimate.spec.normalization();
    if (const auto* anchor = std::get_if<AnchorNormalization>(&norm)) {
        // Written so that the anchor itself evaluates to exactly `value` when it is 0.
        estimate.shift = anchor->value - estimate.scale * estimate.spec.evaluate(anchor->point, estimate.coefficients);
    } else if (const auto* two = std::get_if<TwoPointNormalization>(&norm)) {
        const double f1 = estimate(two->first_point);
        const double f2 = estimate(two->second_point);
        if (f1 == f2) {
            throw NumericalError("two-point normalization: fitted function takes the same value at both points");
        }
        const double a = (two->second_value - two->first_value) / (f2 - f1);
        const double b = two->first_value - a * f1;
        estimate.scale *= a;
        estimate.shift = a * estimate.shift + b;
    }
    return estimate;
}

}  // namespace sieverank
