#pragma once

// Simulation designs with nonclassical measurement error in the outcome.
//
// baseline:  Y* = Z1 + sin(Z2) + U,                    Y = h(Y*) + V
// weighted:  Y* = Z1 + sin(Z2) + cos(W) + U W^2,        Y = h(Y* + W) + V |W|,
//            W = 0.5 Z2 + 0.5 U
//
// with Z1 ~ N(1, sigma^2), Z2 ~ U[-c, c], (U, V) ~ N(0, I_2), and h the
// piecewise-linear map that is the identity between the 30% and 70%
// quantiles of its argument and has slopes a (below) and b (above).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sieverank/sample.hpp"

namespace sieverank {

enum class DgpVariant { Baseline, Weighted };

std::string_view dgp_variant_name(DgpVariant variant);
DgpVariant parse_dgp_variant(std::string_view name);

struct DgpConfig {
    DgpVariant variant = DgpVariant::Baseline;
    std::size_t n = 1000;
    double sigma = 1.0;  // std. dev. of Z1
    double c = 3.0;      // Z2 ~ U[-c, c]
    double a = 0.5;      // slope of h below q30
    double b = 0.5;      // slope of h above q70
    std::size_t quantile_approx_draws = 1'000'000;
    std::uint64_t seed = 0;
    // Test hooks: multiply the U and V noise terms. Leave at 1 in real runs.
    double u_scale = 1.0;
    double v_scale = 1.0;

    /// Throws ConfigError unless n >= 2, sigma > 0, c > 0, a, b >= 0 and
    /// quantile_approx_draws >= 10^4.
    void validate() const;
};

struct HQuantiles {
    double q30 = 0.0;
    double q70 = 0.0;
};

/// The measurement map h. Throws ConfigError if q30 > q70.
double h_piecewise(double ystar, double q30, double q70, double a, double b);

/// Empirical 30%/70% quantiles of the argument of h (Y* for the baseline
/// design, Y* + W for the weighted one) from cfg.quantile_approx_draws
/// simulated draws. Deterministic in cfg.seed.
HQuantiles approximate_quantiles(const DgpConfig& cfg);

struct SimulatedData {
    Sample sample;                 // y = Y, z = (Z1, Z2), w = (W) for the weighted design
    std::vector<double> ystar;     // latent outcome Y*
    std::vector<double> g_true;    // sin(Z2)
    HQuantiles quantiles;
};

/// Draws one sample. The two-argument form reuses precomputed quantiles.
SimulatedData generate(const DgpConfig& cfg);
SimulatedData generate(const DgpConfig& cfg, const HQuantiles& quantiles);

/// Mean squared pointwise difference. Throws ConfigError on length mismatch
/// or empty input.
double mse_on_grid(std::span<const double> curve, std::span<const double> truth_curve);

}  // namespace sieverank
