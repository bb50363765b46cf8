// Command-line front end: simulate, estimate, aggregate, summary.

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sieverank/aggregate.hpp"
#include "sieverank/config.hpp"
#include "sieverank/csv.hpp"
#include "sieverank/errors.hpp"
#include "sieverank/io.hpp"
#include "sieverank/monte_carlo.hpp"
#include "sieverank/optimize.hpp"

namespace fs = std::filesystem;
using namespace sieverank;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct SimulateArgs {
    std::string config;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replications;
    std::optional<std::size_t> threads;
    bool quiet = false;
};

struct EstimateArgs {
    std::string data, schema, spec, grid, out;
    std::string variant = "full";
    std::vector<double> w0;
    std::vector<double> bandwidth;
    std::string kernel = "uniform";
    std::string optimizer;
    std::uint64_t seed = 0;
};

struct AggregateArgs {
    std::string curves;
    std::string method = "lad";
    std::string column = "rank";
    std::string out;
};

struct SummaryArgs {
    std::string data, schema;
};

double sample_sd(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

int run_simulate(const SimulateArgs& args) {
    MCConfig cfg = mc_config_from_json(read_json_file(args.config));
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.replications) cfg.replications = *args.replications;
    if (args.threads) cfg.threads = *args.threads;

    ProgressFn progress;
    if (!args.quiet) {
        progress = [](std::size_t done, std::size_t total) {
            if (done == total || done % 50 == 0) std::cerr << "\r" << done << "/" << total << std::flush;
            if (done == total) std::cerr << "\n";
        };
    }
    const MCSummary summary = run_monte_carlo(cfg, progress);
    write_mc_summary(summary, args.out_dir);

    std::cout << "sigma,c,K,mse_rank,mse_ols,ks_reject_rate,n_failed\n";
    for (const auto& c : summary.cells) {
        std::cout << format_number(c.sigma) << ',' << format_number(c.c) << ',' << c.K << ','
                  << format_number(c.mse_rank) << ',' << format_number(c.mse_ols) << ','
                  << format_number(c.ks_reject_rate) << ',' << c.n_failed << '\n';
        for (const auto& f : c.failures) std::cerr << c.label() << ": " << f << '\n';
    }
    return kOk;
}

int run_estimate(const EstimateArgs& args) {
    const DatasetSchema schema = schema_from_json(read_json_file(args.schema));
    const LoadedData data = load_csv(args.data, schema);
    const Sample& sample = data.sample;
    std::cerr << "rows read " << data.report.rows_read << ", dropped " << data.report.rows_dropped << '\n';

    const SieveSpec spec = realize(sieve_template_from_json(read_json_file(args.spec)), sample.z());
    const Matrix grid = grid_from_json(read_json_file(args.grid));
    if (grid.cols() != schema.z_columns.size()) {
        throw ConfigError("grid points have " + std::to_string(grid.cols()) + " coordinates, schema has " +
                          std::to_string(schema.z_columns.size()) + " z columns");
    }

    OptimizerConfig opt;
    if (!args.optimizer.empty()) opt = optimizer_from_json(read_json_file(args.optimizer));
    opt.seed = args.seed;

    CriterionSelector selector;
    selector.kind = parse_criterion_kind(args.variant);
    if (selector.kind != CriterionKind::Full) {
        const std::size_t dw = schema.w_columns.size();
        if (dw == 0) throw ConfigError("variant '" + args.variant + "' needs w columns in the schema");
        if (selector.kind != CriterionKind::Pairwise) {
            if (args.w0.size() != dw) {
                throw ConfigError("--w0 needs " + std::to_string(dw) + " values");
            }
            selector.w0 = args.w0;
        }
        selector.kernel.family = parse_kernel_family(args.kernel);
        if (!args.bandwidth.empty()) {
            selector.kernel.bandwidths = args.bandwidth;
        } else {
            for (std::size_t l = 0; l < dw; ++l) selector.kernel.bandwidths.push_back(0.5 * sample_sd(sample.w().col(l)));
        }
        if (selector.kind != CriterionKind::DiscreteW) selector.kernel.validate(dw);
    }

    const PhiEstimate rank = maximize_rank_criterion(sample, spec, selector, opt);
    const PhiEstimate ols = series_ols(sample, spec);
    if (rank.degenerate) std::cerr << "warning: no start improved on the zero coefficient vector\n";
    std::cerr << "criterion " << format_number(rank.criterion_value) << ", ols mean squared residual "
              << format_number(ols.criterion_value) << '\n';

    const auto rank_curve = evaluate_on_grid(rank, grid);
    const auto ols_curve = evaluate_on_grid(ols, grid);
    CsvTable table;
    table.header = schema.z_columns;
    table.header.push_back("rank");
    table.header.push_back("ols");
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        std::vector<std::string> row;
        for (double v : grid.row(i)) row.push_back(format_number(v));
        row.push_back(format_number(rank_curve[i]));
        row.push_back(format_number(ols_curve[i]));
        table.rows.push_back(std::move(row));
    }
    write_csv_file(args.out, table);
    return kOk;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    std::vector<std::string> out;
    if (rc == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) throw DataError("cannot expand '" + pattern + "'");
    std::sort(out.begin(), out.end());
    return out;
}

int run_aggregate(const AggregateArgs& args) {
    if (args.method != "ls" && args.method != "lad") throw ConfigError("--method must be ls or lad");
    const auto files = expand_glob(args.curves);
    if (files.empty()) throw DataError("no files match '" + args.curves + "'");

    LocalEstimateSet set;
    std::vector<std::string> grid_names;
    std::vector<std::vector<std::string>> grid_cells;
    for (const auto& file : files) {
        const CsvTable t = read_csv_file(file);
        const std::size_t col = t.column_index(args.column);
        std::vector<std::size_t> grid_cols;
        std::vector<std::string> names;
        for (std::size_t j = 0; j < t.header.size(); ++j) {
            if (t.header[j] == "rank" || t.header[j] == "ols") continue;
            grid_cols.push_back(j);
            names.push_back(t.header[j]);
        }
        std::vector<std::vector<std::string>> cells;
        std::vector<double> curve;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            std::vector<std::string> g;
            for (std::size_t j : grid_cols) g.push_back(t.rows[r][j]);
            cells.push_back(std::move(g));
            double v = 0.0;
            if (!parse_number(t.rows[r][col], v)) {
                throw DataError(file + ": row " + std::to_string(r + 1) + ", column '" + args.column +
                                "' is not a number");
            }
            curve.push_back(v);
        }
        if (grid_names.empty() && grid_cells.empty()) {
            grid_names = names;
            grid_cells = cells;
            set.grid = Matrix(cells.size(), names.size());
            for (std::size_t r = 0; r < cells.size(); ++r)
                for (std::size_t j = 0; j < names.size(); ++j)
                    if (!parse_number(cells[r][j], set.grid(r, j))) {
                        throw DataError(file + ": grid cell '" + cells[r][j] + "' is not a number");
                    }
        } else if (names != grid_names || cells != grid_cells) {
            throw DataError(file + ": grid differs from " + files.front());
        }
        set.curves.append_row(curve);
        set.w_draws.push_back(0.0);
    }

    const auto agg = args.method == "ls" ? aggregate_ls(set) : aggregate_lad(set);
    CsvTable out;
    out.header = grid_names;
    out.header.push_back(args.column);
    for (std::size_t r = 0; r < grid_cells.size(); ++r) {
        auto row = grid_cells[r];
        row.push_back(format_number(agg[r]));
        out.rows.push_back(std::move(row));
    }
    write_csv_file(args.out, out);
    std::cerr << "aggregated " << files.size() << " curves (" << args.method << ")\n";
    return kOk;
}

int run_summary(const SummaryArgs& args) {
    const DatasetSchema schema = schema_from_json(read_json_file(args.schema));
    const LoadedData data = load_csv(args.data, schema);
    const Sample& s = data.sample;

    std::vector<std::pair<std::string, std::vector<double>>> columns;
    columns.emplace_back(schema.y_column, std::vector<double>(s.y().begin(), s.y().end()));
    for (std::size_t j = 0; j < schema.z_columns.size(); ++j) columns.emplace_back(schema.z_columns[j], s.z().col(j));
    for (std::size_t j = 0; j < schema.w_columns.size(); ++j) columns.emplace_back(schema.w_columns[j], s.w().col(j));

    std::cout << "variable,min,q1,median,mean,q3,max\n";
    for (const auto& [name, values] : columns) {
        const auto st = summary_stats(values);
        std::cout << name;
        for (double v : {st.min, st.q1, st.median, st.mean, st.q3, st.max}) std::cout << ',' << format_number(v);
        std::cout << '\n';
    }
    std::cerr << "rows read " << data.report.rows_read << ", dropped " << data.report.rows_dropped << " (";
    bool first = true;
    for (const auto& [name, count] : data.report.missing_per_column) {
        std::cerr << (first ? "" : ", ") << name << ": " << count;
        first = false;
    }
    std::cerr << " missing)\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sieve rank estimation under nonclassical measurement error in the outcome"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo study and write mse_table.csv and curve CSVs");
    simulate->add_option("--config", sim.config, "Monte Carlo JSON config")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();
    simulate->add_option("--seed", sim.seed, "Master seed (overrides the config)");
    simulate->add_option("--replications", sim.replications, "Replications per cell (overrides the config)");
    simulate->add_option("--threads", sim.threads, "Worker threads, 0 = all cores (overrides the config)");
    simulate->add_flag("--quiet", sim.quiet, "No progress output");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Fit the rank estimator and the series baseline on a CSV");
    estimate->add_option("--data", est.data, "Input CSV")->required();
    estimate->add_option("--schema", est.schema, "Column schema JSON")->required()->check(CLI::ExistingFile);
    estimate->add_option("--spec", est.spec, "Sieve space JSON")->required()->check(CLI::ExistingFile);
    estimate->add_option("--grid", est.grid, "Evaluation grid JSON")->required()->check(CLI::ExistingFile);
    estimate->add_option("--out", est.out, "Output curve CSV")->required();
    estimate->add_option("--variant", est.variant, "Criterion variant")
        ->check(CLI::IsMember({"full", "discrete-w", "weighted", "pairwise"}));
    estimate->add_option("--w0", est.w0, "Control value for discrete-w and weighted");
    estimate->add_option("--bandwidth", est.bandwidth, "Kernel bandwidth per control (default 0.5 sd)");
    estimate->add_option("--kernel", est.kernel, "Kernel family")
        ->check(CLI::IsMember({"uniform", "gaussian", "epanechnikov"}));
    estimate->add_option("--optimizer", est.optimizer, "Optimizer settings JSON")->check(CLI::ExistingFile);
    estimate->add_option("--seed", est.seed, "Optimizer seed");

    AggregateArgs agg;
    auto* aggregate = app.add_subcommand("aggregate", "Pointwise LS/LAD aggregation of curve CSVs");
    aggregate->add_option("--curves", agg.curves, "Glob pattern of curve CSVs")->required();
    aggregate->add_option("--method", agg.method, "ls or lad")->check(CLI::IsMember({"ls", "lad"}));
    aggregate->add_option("--column", agg.column, "Curve column to aggregate");
    aggregate->add_option("--out", agg.out, "Output CSV")->required();

    SummaryArgs sum;
    auto* summary = app.add_subcommand("summary", "Six-number summary of the selected columns");
    summary->add_option("--data", sum.data, "Input CSV")->required();
    summary->add_option("--schema", sum.schema, "Column schema JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*simulate) return run_simulate(sim);
        if (*estimate) return run_estimate(est);
        if (*aggregate) return run_aggregate(agg);
        if (*summary) return run_summary(sum);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
