#include "sieverank/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sieverank/errors.hpp"

namespace sieverank {
namespace {

struct Draw {
    double z1, z2, u, v;
};

// One observation's primitives, always consumed in the same order.
class PrimitiveSource {
public:
    PrimitiveSource(const DgpConfig& cfg, std::uint64_t seed)
        : cfg_(cfg), rng_(seed), z1_(1.0, cfg.sigma), z2_(-cfg.c, cfg.c) {}

    Draw next() {
        Draw d{};
        d.z1 = z1_(rng_);
        d.z2 = z2_(rng_);
        d.u = cfg_.u_scale * std_normal_(rng_);
        d.v = cfg_.v_scale * std_normal_(rng_);
        return d;
    }

private:
    const DgpConfig& cfg_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> z1_;
    std::uniform_real_distribution<double> z2_;
    std::normal_distribution<double> std_normal_{0.0, 1.0};
};

double control_of(const Draw& d) { return 0.5 * d.z2 + 0.5 * d.u; }

double latent_of(const DgpConfig& cfg, const Draw& d) {
    if (cfg.variant == DgpVariant::Baseline) return d.z1 + std::sin(d.z2) + d.u;
    const double w = control_of(d);
    return d.z1 + std::sin(d.z2) + std::cos(w) + d.u * w * w;
}

double h_argument(const DgpConfig& cfg, const Draw& d) {
    const double ystar = latent_of(cfg, d);
    return cfg.variant == DgpVariant::Baseline ? ystar : ystar + control_of(d);
}

// Type-1 empirical quantile; partially reorders `values`.
double empirical_quantile(std::vector<double>& values, double p) {
    const std::size_t n = values.size();
    auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end());
    return values[k - 1];
}

}  // namespace

std::string_view dgp_variant_name(DgpVariant variant) {
    return variant == DgpVariant::Baseline ? "baseline" : "weighted";
}

DgpVariant parse_dgp_variant(std::string_view name) {
    if (name == "baseline") return DgpVariant::Baseline;
    if (name == "weighted") return DgpVariant::Weighted;
    throw ConfigError("unknown simulation design '" + std::string(name) + "'");
}

void DgpConfig::validate() const {
    if (n < 2) throw ConfigError("dgp: n must be at least 2");
    if (!(sigma > 0.0)) throw ConfigError("dgp: sigma must be positive");
    if (!(c > 0.0)) throw ConfigError("dgp: c must be positive");
    if (!(a >= 0.0) || !(b >= 0.0)) throw ConfigError("dgp: slopes a, b must be non-negative");
    if (quantile_approx_draws < 10'000) {
        throw ConfigError("dgp: quantile approximation needs at least 10^4 draws");
    }
    if (!(u_scale >= 0.0) || !(v_scale >= 0.0)) throw ConfigError("dgp: noise scales must be non-negative");
}

double h_piecewise(double ystar, double q30, double q70, double a, double b) {
    if (q30 > q70) throw ConfigError("h: q30 must not exceed q70");
    // Unit slopes short-circuit so that a = b = 1 is the identity to the last bit.
    if (ystar > q70) return b == 1.0 ? ystar : q70 + b * (ystar - q70);
    if (ystar >= q30) return ystar;
    return a == 1.0 ? ystar : q30 - a * (q30 - ystar);
}

HQuantiles approximate_quantiles(const DgpConfig& cfg) {
    cfg.validate();
    // A stream distinct from any sample drawn with the same seed.
    PrimitiveSource src(cfg, cfg.seed ^ 0x5bd1e9955bd1e995ULL);
    std::vector<double> values(cfg.quantile_approx_draws);
    for (auto& v : values) v = h_argument(cfg, src.next());
    HQuantiles q;
    q.q30 = empirical_quantile(values, 0.3);
    q.q70 = empirical_quantile(values, 0.7);
    return q;
}

SimulatedData generate(const DgpConfig& cfg, const HQuantiles& quantiles) {
    cfg.validate();
    PrimitiveSource src(cfg, cfg.seed);
    std::vector<double> y(cfg.n);
    Matrix z(cfg.n, 2);
    Matrix w(cfg.n, 1);
    SimulatedData out;
    out.ystar.resize(cfg.n);
    out.g_true.resize(cfg.n);
    out.quantiles = quantiles;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const Draw d = src.next();
        const double ystar = latent_of(cfg, d);
        z(i, 0) = d.z1;
        z(i, 1) = d.z2;
        out.ystar[i] = ystar;
        out.g_true[i] = std::sin(d.z2);
        if (cfg.variant == DgpVariant::Baseline) {
            y[i] = h_piecewise(ystar, quantiles.q30, quantiles.q70, cfg.a, cfg.b) + d.v;
        } else {
            const double wi = control_of(d);
            w(i, 0) = wi;
            y[i] = h_piecewise(ystar + wi, quantiles.q30, quantiles.q70, cfg.a, cfg.b) + d.v * std::abs(wi);
        }
    }
    std::optional<Matrix> controls;
    if (cfg.variant == DgpVariant::Weighted) controls = std::move(w);
    out.sample = Sample(std::move(y), std::move(z), std::move(controls));
    return out;
}

SimulatedData generate(const DgpConfig& cfg) { return generate(cfg, approximate_quantiles(cfg)); }

double mse_on_grid(std::span<const double> curve, std::span<const double> truth_curve) {
    if (curve.size() != truth_curve.size()) {
        throw ConfigError("mse_on_grid: curve has " + std::to_string(curve.size()) +
                          " points, truth has " + std::to_string(truth_curve.size()));
    }
    if (curve.empty()) throw ConfigError("mse_on_grid: empty curves");
    double acc = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double d = curve[i] - truth_curve[i];
        acc += d * d;
    }
    return acc / static_cast<double>(curve.size());
}

}  // namespace sieverank
