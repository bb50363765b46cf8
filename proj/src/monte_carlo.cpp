#include "sieverank/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sieverank/aggregate.hpp"
#include "sieverank/csv.hpp"
#include "sieverank/errors.hpp"
#include "sieverank/ks_test.hpp"
#include "sieverank/parallel.hpp"
#include "sieverank/seeding.hpp"

namespace sieverank {
namespace {

struct Cell {
    double sigma;
    double c;
    int K;
};

struct ReplicationResult {
    bool ok = false;
    std::string error;
    bool ks_tested = false;
    bool ks_reject = false;
    double mse_rank = 0.0;
    double mse_ols = 0.0;
    std::vector<double> rank_curve;
    std::vector<double> ols_curve;
    double seconds = 0.0;
};

// phi = Z1 + spline(Z2), anchored at the origin.
SieveTemplate additive_template(const SplineSettings& spline, int K, std::size_t extra_spline_coord = 0) {
    SieveTemplate t;
    t.components.emplace_back(IdentityComponent{RegressorSelector::coordinate(0), 1.0, true});
    const int n_interior = spline.interior_knots(K);
    t.components.emplace_back(
        SplineTemplate{RegressorSelector::coordinate(1), spline.degree, n_interior, spline.intercept, std::nullopt});
    std::size_t dim = 2;
    if (extra_spline_coord != 0) {
        t.components.emplace_back(SplineTemplate{RegressorSelector::coordinate(extra_spline_coord),
                                                 spline.degree, n_interior, spline.intercept, std::nullopt});
        dim = extra_spline_coord + 1;
    }
    t.normalization = AnchorNormalization{std::vector<double>(dim, 0.0), 0.0};
    return t;
}

Matrix z2_grid_points(const std::vector<double>& z2, std::size_t dim) {
    Matrix g(z2.size(), dim, 0.0);
    for (std::size_t i = 0; i < z2.size(); ++i) g(i, 1) = z2[i];
    return g;
}

double sample_sd(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

ReplicationResult run_baseline(const MCConfig& cfg, const Cell& cell, const DgpConfig& dgp,
                               const HQuantiles& q, const std::vector<double>& grid_z2,
                               const std::vector<double>& truth) {
    ReplicationResult res;
    const SimulatedData data = generate(dgp, q);
    const KsResult ks = ks_two_sample(data.sample.y(), data.ystar);
    res.ks_tested = true;
    res.ks_reject = ks.p_value < cfg.ks_level;

    const SieveSpec spec = realize(additive_template(cfg.spline, cell.K), data.sample.z());
    OptimizerConfig opt = cfg.optimizer;
    opt.seed = stream_seed(dgp.seed, 1);
    const PhiEstimate rank = maximize_rank_criterion(data.sample, spec, CriterionSelector{}, opt);
    const PhiEstimate ols = series_ols(data.sample, spec);

    const Matrix grid = z2_grid_points(grid_z2, 2);
    res.rank_curve = evaluate_on_grid(rank, grid);
    res.ols_curve = evaluate_on_grid(ols, grid);
    res.mse_rank = mse_on_grid(res.rank_curve, truth);
    res.mse_ols = mse_on_grid(res.ols_curve, truth);
    res.ok = true;
    return res;
}

ReplicationResult run_weighted(const MCConfig& cfg, const Cell& cell, const DgpConfig& dgp,
                               const HQuantiles& q, const std::vector<double>& grid_z2,
                               const std::vector<double>& truth) {
    ReplicationResult res;
    const SimulatedData data = generate(dgp, q);
    const Sample& sample = data.sample;
    const KsResult ks = ks_two_sample(sample.y(), data.ystar);
    res.ks_tested = true;
    res.ks_reject = ks.p_value < cfg.ks_level;

    const std::vector<double> w = sample.w().col(0);
    const double s = cfg.weighted.bandwidth ? *cfg.weighted.bandwidth
                                            : cfg.weighted.bandwidth_scale * sample_sd(w);
    const SieveSpec spec = realize(additive_template(cfg.spline, cell.K), sample.z());
    const Matrix grid = z2_grid_points(grid_z2, 2);

    std::mt19937_64 rng(stream_seed(dgp.seed, 2));
    std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
    LocalEstimateSet local;
    local.grid = grid;
    for (std::size_t d = 0; d < cfg.weighted.w_draws; ++d) {
        const double w0 = w[pick(rng)];
        CriterionSelector sel{CriterionKind::Weighted, {w0}, KernelSpec{cfg.weighted.kernel, {s}}, true};
        const PreparedCriterion crit(sample, sel);
        if (crit.empty()) continue;
        OptimizerConfig opt = cfg.optimizer;
        opt.seed = derive_seed(dgp.seed, 3, d);
        const PhiEstimate est = maximize_rank_criterion(crit, sample, spec, opt);
        local.curves.append_row(evaluate_on_grid(est, grid));
        local.w_draws.push_back(w0);
    }
    if (local.curves.rows() == 0) {
        throw NumericalError("no local estimate: every control window was empty");
    }
    res.rank_curve = aggregate_lad(local);

    // Series fit of the misspecified additive model Y = Z1 + g(Z2) + m(W) + error.
    Matrix zw(sample.size(), 3);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        zw(i, 0) = sample.z()(i, 0);
        zw(i, 1) = sample.z()(i, 1);
        zw(i, 2) = w[i];
    }
    const Sample augmented(std::vector<double>(sample.y().begin(), sample.y().end()), zw);
    const SieveSpec ols_spec = realize(additive_template(cfg.spline, cell.K, 2), zw);
    const PhiEstimate ols = series_ols(augmented, ols_spec);
    res.ols_curve = evaluate_on_grid(ols, z2_grid_points(grid_z2, 3));

    res.mse_rank = mse_on_grid(res.rank_curve, truth);
    res.mse_ols = mse_on_grid(res.ols_curve, truth);
    res.ok = true;
    return res;
}

}  // namespace

int SplineSettings::interior_knots(int K) const {
    const int n_interior = K - degree - (intercept ? 1 : 0);
    if (degree < 0 || n_interior < 0) {
        throw ConfigError("sieve dimension K=" + std::to_string(K) + " is too small for degree " +
                          std::to_string(degree));
    }
    return n_interior;
}

void MCConfig::validate() const {
    if (n < 2) throw ConfigError("simulate: n must be at least 2");
    if (sigmas.empty() || cs.empty() || Ks.empty()) {
        throw ConfigError("simulate: sigma, c and K lists must be non-empty");
    }
    if (replications < 1) throw ConfigError("simulate: replications must be at least 1");
    if (grid.points < 1) throw ConfigError("simulate: grid needs at least one point");
    for (double c : cs) {
        if (!(c > grid.margin)) throw ConfigError("simulate: every c must exceed the grid margin");
    }
    for (int K : Ks) spline.interior_knots(K);
    if (!(ks_level > 0.0 && ks_level < 1.0)) throw ConfigError("simulate: ks_level must be in (0, 1)");
    if (variant == DgpVariant::Weighted) {
        if (weighted.w_draws < 1) throw ConfigError("simulate: w_draws must be at least 1");
        if (weighted.bandwidth && !(*weighted.bandwidth > 0.0)) {
            throw ConfigError("simulate: bandwidth must be positive");
        }
        if (!weighted.bandwidth && !(weighted.bandwidth_scale > 0.0)) {
            throw ConfigError("simulate: bandwidth_scale must be positive");
        }
    }
    optimizer.validate();
    DgpConfig probe;
    probe.n = n;
    probe.sigma = sigmas.front();
    probe.c = cs.front();
    probe.a = a;
    probe.b = b;
    probe.quantile_approx_draws = quantile_draws;
    for (double s : sigmas) {
        probe.sigma = s;
        probe.validate();
    }
    for (double c : cs) {
        probe.c = c;
        probe.validate();
    }
}

std::string CellSummary::label() const {
    return "sigma" + format_number(sigma) + "_c" + format_number(c) + "_K" + std::to_string(K);
}

double quantile_type7(std::vector<double> values, double p) {
    if (values.empty()) throw ConfigError("quantile of an empty set");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

MCSummary run_monte_carlo(const MCConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();

    // Cells sharing (sigma, c) share a design index and therefore draw the
    // same samples: comparisons across K are paired.
    std::vector<Cell> cells;
    std::vector<std::size_t> design_of;
    std::size_t design = 0;
    for (double sigma : cfg.sigmas) {
        for (double c : cfg.cs) {
            for (int K : cfg.Ks) {
                cells.push_back({sigma, c, K});
                design_of.push_back(design);
            }
            ++design;
        }
    }

    const std::size_t reps = cfg.replications;
    const std::size_t total = cells.size() * reps;
    std::vector<HQuantiles> quantiles(cells.size());
    std::vector<DgpConfig> base(cells.size());
    std::vector<std::vector<double>> grids(cells.size()), truths(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        DgpConfig d;
        d.variant = cfg.variant;
        d.n = cfg.n;
        d.sigma = cells[k].sigma;
        d.c = cells[k].c;
        d.a = cfg.a;
        d.b = cfg.b;
        d.quantile_approx_draws = cfg.quantile_draws;
        d.seed = derive_seed(cfg.master_seed, design_of[k], 0xffffffffULL);
        base[k] = d;
        const double lo = -cells[k].c + cfg.grid.margin;
        const double hi = cells[k].c - cfg.grid.margin;
        auto& g = grids[k];
        g.resize(cfg.grid.points);
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] = g.size() == 1 ? 0.5 * (lo + hi)
                                 : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g.size() - 1);
        }
        truths[k].resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) truths[k][i] = std::sin(g[i]);
    }
    parallel_for(cells.size(), cfg.threads, [&](std::size_t k) { quantiles[k] = approximate_quantiles(base[k]); });

    std::vector<ReplicationResult> results(total);
    std::atomic<std::size_t> done{0};
    parallel_for(total, cfg.threads, [&](std::size_t task) {
        const std::size_t k = task / reps;
        const std::size_t r = task % reps;
        DgpConfig dgp = base[k];
        dgp.seed = derive_seed(cfg.master_seed, design_of[k], r);
        ReplicationResult res;
        const auto started = std::chrono::steady_clock::now();
        try {
            res = cfg.variant == DgpVariant::Baseline
                      ? run_baseline(cfg, cells[k], dgp, quantiles[k], grids[k], truths[k])
                      : run_weighted(cfg, cells[k], dgp, quantiles[k], grids[k], truths[k]);
        } catch (const Error& e) {
            res.ok = false;
            res.error = "replication " + std::to_string(r) + ": " + e.what();
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        results[task] = std::move(res);
        const std::size_t finished = ++done;
        if (progress) progress(finished, total);
    });

    MCSummary summary;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        CellSummary cs;
        cs.sigma = cells[k].sigma;
        cs.c = cells[k].c;
        cs.K = cells[k].K;
        cs.replications = reps;
        cs.grid = grids[k];
        cs.truth = truths[k];
        const std::size_t m = cs.grid.size();
        std::vector<std::vector<double>> rank_at(m), ols_at(m);
        std::size_t ks_tested = 0, ks_rejected = 0, ok = 0;
        double sum_rank = 0.0, sum_ols = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            const auto& res = results[k * reps + r];
            cs.seconds += res.seconds;
            if (res.ks_tested) {
                ++ks_tested;
                if (res.ks_reject) ++ks_rejected;
            }
            if (!res.ok) {
                ++cs.n_failed;
                cs.failures.push_back(res.error);
                continue;
            }
            ++ok;
            sum_rank += res.mse_rank;
            sum_ols += res.mse_ols;
            for (std::size_t i = 0; i < m; ++i) {
                rank_at[i].push_back(res.rank_curve[i]);
                ols_at[i].push_back(res.ols_curve[i]);
            }
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        cs.mse_rank = ok ? sum_rank / static_cast<double>(ok) : nan;
        cs.mse_ols = ok ? sum_ols / static_cast<double>(ok) : nan;
        cs.ks_reject_rate = ks_tested ? static_cast<double>(ks_rejected) / static_cast<double>(ks_tested) : nan;
        for (std::size_t i = 0; i < m; ++i) {
            const bool any = ok > 0;
            cs.rank_median.push_back(any ? quantile_type7(rank_at[i], 0.5) : nan);
            cs.rank_q05.push_back(any ? quantile_type7(rank_at[i], 0.05) : nan);
            cs.rank_q95.push_back(any ? quantile_type7(rank_at[i], 0.95) : nan);
            cs.ols_median.push_back(any ? quantile_type7(ols_at[i], 0.5) : nan);
            cs.ols_q05.push_back(any ? quantile_type7(ols_at[i], 0.05) : nan);
            cs.ols_q95.push_back(any ? quantile_type7(ols_at[i], 0.95) : nan);
        }
        summary.cells.push_back(std::move(cs));
    }
    summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

void write_mc_summary(const MCSummary& summary, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());

    CsvTable table;
    table.header = {"sigma", "c", "K", "mse_rank", "mse_ols", "ks_reject_rate", "n_failed"};
    for (const auto& cs : summary.cells) {
        table.rows.push_back({format_number(cs.sigma), format_number(cs.c), std::to_string(cs.K),
                              format_number(cs.mse_rank), format_number(cs.mse_ols),
                              format_number(cs.ks_reject_rate), std::to_string(cs.n_failed)});
    }
    write_csv_file(dir / "mse_table.csv", table);

    for (const auto& cs : summary.cells) {
        CsvTable curves;
        curves.header = {"z2", "truth", "rank_median", "rank_q05", "rank_q95", "ols_median"};
        for (std::size_t i = 0; i < cs.grid.size(); ++i) {
            curves.rows.push_back({format_number(cs.grid[i]), format_number(cs.truth[i]),
                                   format_number(cs.rank_median[i]), format_number(cs.rank_q05[i]),
                                   format_number(cs.rank_q95[i]), format_number(cs.ols_median[i])});
        }
        write_csv_file(dir / ("curves_" + cs.label() + ".csv"), curves);
    }
}

}  // namespace sieverank
