#include "sieverank/optimize.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sieverank/errors.hpp"
#include "sieverank/kernels.hpp"
#include "sieverank/nelder_mead.hpp"
#include "sieverank/seeding.hpp"

namespace sieverank {

void OptimizerConfig::validate() const {
    if (n_starts <= 0) throw ConfigError("optimizer: n_starts must be positive");
    if (max_iters <= 0) throw ConfigError("optimizer: max_iters must be positive");
    if (!(init_scale > 0.0)) throw ConfigError("optimizer: init_scale must be positive");
    if (!(ftol > 0.0) || !(xtol > 0.0)) throw ConfigError("optimizer: tolerances must be positive");
}

namespace {

double squared_norm(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

}  // namespace

PhiEstimate maximize_rank_criterion(const PreparedCriterion& criterion, const Sample& sample,
                                    const SieveSpec& spec, const OptimizerConfig& cfg) {
    cfg.validate();
    const std::size_t free = spec.free_count();
    if (free == 0) throw ConfigError("sieve space has no free coefficients to optimize");
    if (criterion.empty()) {
        throw DataError("criterion cell/window holds fewer than two observations");
    }

    const DesignMatrix design = build_design(spec, sample.z(), criterion.rows());
    std::vector<double> phi(design.rows);
    auto objective = [&](std::span<const double> coeffs) {
        kernels::affine_columns(design.offset, design.columns, coeffs, phi);
        return criterion(phi);
    };

    const NelderMeadOptions nm{cfg.max_iters, cfg.ftol, cfg.xtol, cfg.init_scale};
    std::vector<double> best_x(free, 0.0);
    double best_value = -std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (int s = 0; s < cfg.n_starts; ++s) {
        std::mt19937_64 rng(stream_seed(cfg.seed, static_cast<std::uint64_t>(s)));
        std::uniform_real_distribution<double> init(-cfg.init_scale, cfg.init_scale);
        std::vector<double> x0(free);
        for (auto& v : x0) v = init(rng);

        NelderMeadResult r = nelder_mead_maximize(objective, std::move(x0), nm);
        const bool better = !have_best || r.value > best_value ||
                            (r.value == best_value && squared_norm(r.x) < squared_norm(best_x));
        if (better) {
            best_x = std::move(r.x);
            best_value = r.value;
            have_best = true;
        }
    }

    PhiEstimate est{spec, best_x, best_value, 1.0, 0.0, false};
    const std::vector<double> zero(free, 0.0);
    const double zero_value = objective(zero);
    if (!(best_value > zero_value)) {
        est.degenerate = true;
        if (zero_value > best_value) {
            est.coefficients = zero;
            est.criterion_value = zero_value;
        }
    }
    return apply_normalization(std::move(est));
}

PhiEstimate maximize_rank_criterion(const Sample& sample, const SieveSpec& spec,
                                    const CriterionSelector& selector, const OptimizerConfig& cfg) {
    const PreparedCriterion criterion(sample, selector);
    return maximize_rank_criterion(criterion, sample, spec, cfg);
}

PhiEstimate series_ols(const Sample& sample, const SieveSpec& spec) {
    const std::size_t n = sample.size();
    const std::size_t free = spec.free_count();
    bool spans_constants = false;
    for (const auto& c : spec.components()) {
        if (const auto* sp = std::get_if<SplineComponent>(&c)) spans_constants |= sp->intercept;
    }
    const std::size_t p = free + (spans_constants ? 0 : 1);
    if (p == 0) throw ConfigError("series regression needs at least one free coefficient");
    if (n < p) {
        throw DataError("series regression: " + std::to_string(n) + " observations for " +
                        std::to_string(p) + " coefficients");
    }

    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd r(n);
    std::vector<double> row(free);
    const auto y = sample.y();
    for (std::size_t i = 0; i < n; ++i) {
        const double offset = spec.design_row(sample.z().row(i), row);
        for (std::size_t k = 0; k < free; ++k) x(i, k) = row[k];
        if (!spans_constants) x(i, free) = 1.0;
        r(i) = y[i] - offset;
    }

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < static_cast<Eigen::Index>(p)) {
        std::string cols;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < perm.size(); ++k) {
            if (!cols.empty()) cols += ", ";
            cols += std::to_string(perm(k));
        }
        throw NumericalError("series regression design is rank deficient (rank " +
                             std::to_string(qr.rank()) + " of " + std::to_string(p) +
                             "); dependent columns: " + cols);
    }
    const Eigen::VectorXd beta = qr.solve(r);
    const Eigen::VectorXd resid = r - x * beta;

    PhiEstimate est;
    est.spec = spec;
    est.coefficients.assign(beta.data(), beta.data() + free);
    est.shift = spans_constants ? 0.0 : beta(static_cast<Eigen::Index>(free));
    est.criterion_value = resid.squaredNorm() / static_cast<double>(n);
    return apply_normalization(std::move(est));
}

std::vector<double> evaluate_on_grid(const PhiEstimate& estimate, const Matrix& grid) {
    std::vector<double> out(grid.rows());
    for (std::size_t i = 0; i < grid.rows(); ++i) out[i] = estimate(grid.row(i));
    return out;
}

}  // namespace sieverank
