#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sieverank/dgp.hpp"
#include "sieverank/optimize.hpp"
#include "sieverank/rank.hpp"

namespace sieverank {

/// How a sieve dimension K maps onto a B-spline block for Z2. With
/// intercept == false the first basis function is dropped and
/// K = degree + #interior knots; otherwise K = degree + #interior knots + 1.
struct SplineSettings {
    int degree = 2;
    bool intercept = false;

    /// Interior knot count for dimension K. Throws ConfigError if K is too small.
    int interior_knots(int K) const;
};

struct GridSettings {
    std::size_t points = 101;
    double margin = 0.1;  // grid spans [-c + margin, c - margin] in Z2
};

/// Local-estimate settings for the weighted design.
struct WeightedSettings {
    std::size_t w_draws = 50;
    KernelFamily kernel = KernelFamily::Uniform;
    double bandwidth_scale = 0.5;      // s = bandwidth_scale * sd(W) ...
    std::optional<double> bandwidth;   // ... unless a fixed bandwidth is given
};

struct MCConfig {
    DgpVariant variant = DgpVariant::Baseline;
    std::size_t n = 1000;
    std::vector<double> sigmas{1.0};
    std::vector<double> cs{3.0};
    std::vector<int> Ks{4};
    double a = 0.5;
    double b = 0.5;
    std::size_t replications = 1000;
    std::size_t quantile_draws = 1'000'000;
    SplineSettings spline;
    OptimizerConfig optimizer;
    GridSettings grid;
    WeightedSettings weighted;
    double ks_level = 0.05;
    std::uint64_t master_seed = 0;
    std::size_t threads = 0;  // 0 = all hardware threads

    void validate() const;
};

struct CellSummary {
    double sigma = 0.0;
    double c = 0.0;
    int K = 0;
    std::size_t replications = 0;
    std::size_t n_failed = 0;
    double mse_rank = 0.0;  // mean over successful replications of the grid MSE
    double mse_ols = 0.0;
    double ks_reject_rate = 0.0;
    std::vector<double> grid;  // Z2 evaluation points
    std::vector<double> truth;
    std::vector<double> rank_median, rank_q05, rank_q95;
    std::vector<double> ols_median, ols_q05, ols_q95;
    std::vector<std::string> failures;  // one message per failed replication
    double seconds = 0.0;  // summed over replications, not wall time

    /// File-name friendly cell key, e.g. "sigma1_c3_K4".
    std::string label() const;
};

struct MCSummary {
    std::vector<CellSummary> cells;
    double seconds = 0.0;
};

/// Called after each finished replication with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Runs every (sigma, c, K) cell for cfg.replications replications. Each
/// replication draws its data from a seed derived from (master_seed,
/// (sigma, c) design, replication), so all K cells of a design see the same
/// samples, then fits the rank estimator and the series baseline, both
/// anchored at the origin. Results are independent of the thread count.
MCSummary run_monte_carlo(const MCConfig& cfg, const ProgressFn& progress = {});

/// Writes mse_table.csv and one curves_<label>.csv per cell into `dir`.
void write_mc_summary(const MCSummary& summary, const std::filesystem::path& dir);

/// Type-7 (linear interpolation) quantile of unsorted values.
double quantile_type7(std::vector<double> values, double p);

}  // namespace sieverank
