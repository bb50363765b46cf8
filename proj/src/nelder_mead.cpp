#include "sieverank/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sieverank/errors.hpp"

namespace sieverank {
namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& options) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw ConfigError("Nelder-Mead needs at least one parameter");
    if (options.max_iters <= 0 || !(options.initial_step > 0.0)) {
        throw ConfigError("Nelder-Mead: max_iters and initial_step must be positive");
    }

    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        return f(x);
    };

    std::vector<std::vector<double>> simplex(dim + 1, x0);
    for (std::size_t k = 0; k < dim; ++k) simplex[k + 1][k] += options.initial_step;
    std::vector<double> values(dim + 1);
    for (std::size_t v = 0; v <= dim; ++v) values[v] = eval(simplex[v]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);

    auto point_along = [&](double t, const std::vector<double>& from, std::vector<double>& out) {
        // out = centroid + t * (from - centroid)
        for (std::size_t k = 0; k < dim; ++k) out[k] = centroid[k] + t * (from[k] - centroid[k]);
    };

    for (result.iterations = 0; result.iterations < options.max_iters; ++result.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Best first. Ties keep vertex order so the search is deterministic.
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        if (values[best] - values[worst] < options.ftol) {
            result.converged = true;
            result.plateau = true;
            break;
        }
        double spread = 0.0;
        for (std::size_t v = 0; v <= dim; ++v) {
            for (std::size_t k = 0; k < dim; ++k) {
                spread = std::max(spread, std::abs(simplex[v][k] - simplex[best][k]));
            }
        }
        if (spread < options.xtol) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t v = 0; v <= dim; ++v) {
            if (v == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[v][k];
        }
        for (auto& c : centroid) c /= static_cast<double>(dim);

        point_along(-kReflect, simplex[worst], trial);
        const double f_reflect = eval(trial);

        if (f_reflect > values[best]) {
            point_along(kExpand, trial, trial2);  // centroid + 2 (reflected - centroid)
            const double f_expand = eval(trial2);
            if (f_expand > f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_expand;
            } else {
                simplex[worst] = trial;
                values[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect > values[second_worst]) {
            simplex[worst] = trial;
            values[worst] = f_reflect;
            continue;
        }
        if (f_reflect > values[worst]) {
            point_along(kContract, trial, trial2);  // outside contraction
            const double f_contract = eval(trial2);
            if (f_contract >= f_reflect) {
                simplex[worst] = trial2;
                values[worst] = f_contract;
                continue;
            }
        } else {
            point_along(kContract, simplex[worst], trial2);  // inside contraction
            const double f_contract = eval(trial2);
            if (f_contract > values[worst]) {
                simplex[worst] = trial2;
                values[worst] = f_contract;
                continue;
            }
        }
        for (std::size_t v = 0; v <= dim; ++v) {
            if (v == best) continue;
            for (std::size_t k = 0; k < dim; ++k) {
                simplex[v][k] = simplex[best][k] + kShrink * (simplex[v][k] - simplex[best][k]);
            }
            values[v] = eval(simplex[v]);
        }
    }

    const auto best_it = std::max_element(values.begin(), values.end());
    const auto best = static_cast<std::size_t>(best_it - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    if (result.plateau) {
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (const auto& v : simplex) {
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += v[k];
        }
        for (auto& c : centroid) c /= static_cast<double>(dim + 1);
        const double f_centroid = eval(centroid);
        if (f_centroid >= result.value) {
            result.x = centroid;
            result.value = f_centroid;
        }
    }
    return result;
}

}  // namespace sieverank
