#pragma once

// Slow, direct reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "sieverank/matrix.hpp"
#include "sieverank/rank.hpp"

namespace oracle {

// Cox-de Boor recursion with no span search and no caching. The last basis
// function is closed at the right boundary.
inline double bspline(std::span<const double> t, int p, std::size_t k, double x) {
    if (p == 0) {
        const bool last = t[k + 1] == t.back() && t[k] < t[k + 1];
        if (t[k] <= x && (x < t[k + 1] || (last && x == t.back()))) return 1.0;
        return 0.0;
    }
    double left = 0.0, right = 0.0;
    const double d1 = t[k + p] - t[k];
    const double d2 = t[k + p + 1] - t[k + 1];
    if (d1 > 0) left = (x - t[k]) / d1 * bspline(t, p - 1, k, x);
    if (d2 > 0) right = (t[k + p + 1] - x) / d2 * bspline(t, p - 1, k + 1, x);
    return left + right;
}

inline std::vector<std::int64_t> ranks(std::span<const double> v) {
    std::vector<std::int64_t> out(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (j != i && v[j] < v[i]) ++out[i];
    return out;
}

inline double full(std::span<const double> y, std::span<const double> phi) {
    const std::size_t n = y.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && phi[i] > phi[j]) s += y[i];
    return s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

inline double discrete_w(std::span<const double> y, std::span<const double> phi,
                         const sieverank::Matrix& w, std::span<const double> w0) {
    auto in_cell = [&](std::size_t i) {
        for (std::size_t l = 0; l < w0.size(); ++l)
            if (w(i, l) != w0[l]) return false;
        return true;
    };
    double s = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!in_cell(i)) continue;
        ++m;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (i != j && in_cell(j) && phi[i] > phi[j]) s += y[i];
    }
    if (m < 2) return 0.0;
    return s / (static_cast<double>(m) * static_cast<double>(m - 1));
}

inline double product_kernel(const sieverank::KernelSpec& k, std::span<const double> a,
                             std::span<const double> b) {
    double out = 1.0;
    for (std::size_t l = 0; l < a.size(); ++l)
        out *= sieverank::kernel_value(k.family, (a[l] - b[l]) / k.bandwidths[l]);
    return out;
}

inline double weighted(std::span<const double> y, std::span<const double> phi,
                       const sieverank::Matrix& w, std::span<const double> w0,
                       const sieverank::KernelSpec& k) {
    const std::size_t n = y.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && phi[i] > phi[j])
                s += product_kernel(k, w.row(i), w0) * y[i] * product_kernel(k, w.row(j), w0);
    return s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

inline double pairwise(std::span<const double> y, std::span<const double> phi,
                       const sieverank::Matrix& w, const sieverank::KernelSpec& k) {
    const std::size_t n = y.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && phi[i] > phi[j]) s += y[i] * product_kernel(k, w.row(i), w.row(j));
    return s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// sup_t |F_x(t) - F_y(t)| over every observed value.
inline double ks_statistic(std::span<const double> x, std::span<const double> y) {
    auto ecdf = [](std::span<const double> s, double t) {
        return static_cast<double>(std::count_if(s.begin(), s.end(), [t](double v) { return v <= t; })) /
               static_cast<double>(s.size());
    };
    double d = 0.0;
    for (auto sample : {x, y})
        for (double t : sample) d = std::max(d, std::abs(ecdf(x, t) - ecdf(y, t)));
    return d;
}

// argmin_c sum w_i (v_i - c)^2 by golden-section search.
inline double min_squared_loss(std::span<const double> v, std::span<const double> w) {
    auto loss = [&](double c) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * (v[i] - c) * (v[i] - c);
        return s;
    };
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double a = hi - r * (hi - lo);
        const double b = lo + r * (hi - lo);
        if (loss(a) < loss(b)) hi = b;
        else lo = a;
    }
    return 0.5 * (lo + hi);
}

inline double absolute_loss(std::span<const double> v, std::span<const double> w, double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::abs(v[i] - c);
    return s;
}

// Smallest absolute loss over the sample points; the minimum of a piecewise
// linear convex function is attained at one of them.
inline double min_absolute_loss(std::span<const double> v, std::span<const double> w) {
    double best = std::numeric_limits<double>::infinity();
    for (double c : v) best = std::min(best, absolute_loss(v, w, c));
    return best;
}

inline double kendall_tau(std::span<const double> a, std::span<const double> b) {
    double concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double s = (a[i] - a[j]) * (b[i] - b[j]);
            if (s > 0) ++concordant;
            else if (s < 0) ++discordant;
        }
    return (concordant - discordant) / (concordant + discordant);
}

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Values drawn from a small set so that ties are common.
inline std::vector<double> tied_vector(std::mt19937_64& rng, std::size_t n, int levels) {
    std::uniform_int_distribution<int> u(0, levels - 1);
    std::vector<double> v(n);
    for (auto& x : v) x = 0.25 * u(rng);
    return v;
}

}  // namespace oracle
