#include "sieverank/bspline.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "sieverank/errors.hpp"

namespace sieverank {

BSplineBasis::BSplineBasis(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
    if (degree_ < 0) throw ConfigError("B-spline degree must be non-negative");
    const auto order = static_cast<std::size_t>(degree_) + 1;
    if (knots_.size() < 2 * order) {
        throw ConfigError("knot vector too short for degree " + std::to_string(degree_));
    }
    if (!std::is_sorted(knots_.begin(), knots_.end())) {
        throw ConfigError("knot vector must be non-decreasing");
    }
    for (std::size_t i = 1; i < order; ++i) {
        if (knots_[i] != knots_.front() || knots_[knots_.size() - 1 - i] != knots_.back()) {
            throw ConfigError("knot vector must be clamped (boundary knots repeated degree+1 times)");
        }
    }
    if (!(knots_.front() < knots_.back())) {
        throw ConfigError("knot vector has zero-width support");
    }
}

std::size_t BSplineBasis::find_span(double x) const {
    const auto p = static_cast<std::size_t>(degree_);
    const std::size_t last = size() - 1;
    if (x >= knots_[last + 1]) return last;
    // knots_[s] <= x < knots_[s+1], s in [p, last]
    auto it = std::upper_bound(knots_.begin() + static_cast<std::ptrdiff_t>(p),
                               knots_.begin() + static_cast<std::ptrdiff_t>(last + 1), x);
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

std::size_t BSplineBasis::eval_nonzero(double x, std::span<double> out) const {
    const auto p = static_cast<std::size_t>(degree_);
    x = std::clamp(x, lower(), upper());
    const std::size_t span = find_span(x);

    // Triangular Cox-de Boor scheme over the degree+1 active functions.
    constexpr std::size_t kMaxOrder = 32;
    if (p + 1 > kMaxOrder) throw ConfigError("B-spline degree too large");
    std::array<double, kMaxOrder> left{}, right{};
    out[0] = 1.0;
    for (std::size_t j = 1; j <= p; ++j) {
        left[j] = x - knots_[span + 1 - j];
        right[j] = knots_[span + j] - x;
        double saved = 0.0;
        for (std::size_t r = 0; r < j; ++r) {
            const double denom = right[r + 1] + left[j - r];
            const double temp = denom != 0.0 ? out[r] / denom : 0.0;
            out[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[j] = saved;
    }
    return span - p;
}

void BSplineBasis::eval_all(double x, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    std::array<double, 32> local{};
    const auto order = static_cast<std::size_t>(degree_) + 1;
    const std::size_t first = eval_nonzero(x, std::span<double>(local.data(), order));
    for (std::size_t r = 0; r < order; ++r) out[first + r] = local[r];
}

double BSplineBasis::eval(std::size_t k, double x) const {
    if (k >= size()) {
        throw ConfigError("basis index " + std::to_string(k) + " out of range (size " +
                          std::to_string(size()) + ")");
    }
    std::array<double, 32> local{};
    const auto order = static_cast<std::size_t>(degree_) + 1;
    const std::size_t first = eval_nonzero(x, std::span<double>(local.data(), order));
    if (k < first || k >= first + order) return 0.0;
    return local[k - first];
}

double bspline_eval(const BSplineBasis& basis, std::size_t k, double x) { return basis.eval(k, x); }

std::vector<double> make_knot_vector(std::span<const double> data, int degree, int n_interior) {
    if (data.empty()) throw DataError("cannot place knots on empty data");
    if (degree < 0) throw ConfigError("B-spline degree must be non-negative");
    if (n_interior < 0) throw ConfigError("number of interior knots must be non-negative");

    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    if (!(lo < hi)) throw DataError("cannot place knots: data has zero-width support");

    const std::size_t n = sorted.size();
    const auto m = static_cast<std::size_t>(n_interior);
    std::vector<double> knots;
    knots.reserve(2 * (static_cast<std::size_t>(degree) + 1) + m);
    knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, lo);
    for (std::size_t j = 1; j <= m; ++j) {
        // Type-1 quantile at level j/(m+1): order statistic ceil(n*j/(m+1)), 1-based.
        std::size_t idx = (n * j + m) / (m + 1);
        idx = std::max<std::size_t>(idx, 1);
        knots.push_back(sorted[idx - 1]);
    }
    knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, hi);
    return knots;
}

}  // namespace sieverank
