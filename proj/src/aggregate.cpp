#include "sieverank/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sieverank/errors.hpp"

namespace sieverank {
namespace {

constexpr double kWeightSumTol = 1e-12;

}  // namespace

void LocalEstimateSet::validate() const {
    if (curves.rows() == 0) throw ConfigError("local estimate set is empty");
    if (curves.cols() != grid.rows()) {
        throw ConfigError("curves have " + std::to_string(curves.cols()) + " columns, grid has " +
                          std::to_string(grid.rows()) + " points");
    }
    if (!w_draws.empty() && w_draws.size() != curves.rows()) {
        throw ConfigError("w_draws and curves disagree on the number of local estimates");
    }
    if (weights) {
        if (weights->size() != curves.rows()) throw ConfigError("one weight per curve required");
        double total = 0.0;
        for (double v : *weights) {
            if (!(v >= 0.0)) throw ConfigError("aggregation weights must be non-negative");
            total += v;
        }
        if (std::abs(total - 1.0) > kWeightSumTol) {
            throw ConfigError("aggregation weights must sum to 1");
        }
    }
}

std::vector<double> aggregate_ls(const LocalEstimateSet& set) {
    set.validate();
    const std::size_t m = set.curves.rows();
    std::vector<double> out(set.curves.cols(), 0.0);
    for (std::size_t g = 0; g < out.size(); ++g) {
        double acc = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double w = set.weights ? (*set.weights)[r] : 1.0;
            acc += w * set.curves(r, g);
        }
        out[g] = set.weights ? acc : acc / static_cast<double>(m);
    }
    return out;
}

double weighted_median(std::vector<double> values, const std::vector<double>& weights) {
    if (values.empty()) throw ConfigError("median of an empty set");
    if (weights.empty()) {
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        if (n % 2 == 1) return values[n / 2];
        return 0.5 * (values[n / 2 - 1] + values[n / 2]);
    }

    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    // Drop zero-weight entries: they do not affect the loss.
    std::vector<std::size_t> live;
    double total = 0.0;
    for (std::size_t i : idx) {
        if (weights[i] > 0.0) {
            live.push_back(i);
            total += weights[i];
        }
    }
    if (live.empty()) throw ConfigError("all aggregation weights are zero");
    const double half = 0.5 * total;
    double cum = 0.0;
    for (std::size_t k = 0; k < live.size(); ++k) {
        cum += weights[live[k]];
        if (std::abs(cum - half) <= kWeightSumTol * total && k + 1 < live.size()) {
            return 0.5 * (values[live[k]] + values[live[k + 1]]);
        }
        if (cum > half) return values[live[k]];
    }
    return values[live.back()];
}

std::vector<double> aggregate_lad(const LocalEstimateSet& set) {
    set.validate();
    const std::size_t m = set.curves.rows();
    const std::vector<double> no_weights;
    std::vector<double> out(set.curves.cols());
    std::vector<double> column(m);
    for (std::size_t g = 0; g < out.size(); ++g) {
        for (std::size_t r = 0; r < m; ++r) column[r] = set.curves(r, g);
        out[g] = weighted_median(column, set.weights ? *set.weights : no_weights);
    }
    return out;
}

}  // namespace sieverank
