#include "sieverank/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "sieverank/errors.hpp"
#include "sieverank/kernels.hpp"

namespace sieverank {
namespace {

// Above this many active rows the pairwise weights are recomputed per row
// instead of being stored as a dense n x n block.
constexpr std::size_t kDensePairLimit = 4096;

using Keyed = std::pair<double, std::uint32_t>;

std::vector<Keyed>& sort_scratch() {
    thread_local std::vector<Keyed> scratch;
    return scratch;
}

void sort_by_value(std::span<const double> values, std::vector<Keyed>& keyed) {
    keyed.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        keyed[i] = {values[i], static_cast<std::uint32_t>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
}

// sum_i a_i * #{j : v_j < v_i}
double unit_rank_sum(std::span<const double> a, std::span<const double> values) {
    auto& keyed = sort_scratch();
    sort_by_value(values, keyed);
    const std::size_t n = keyed.size();
    double total = 0.0;
    std::size_t g = 0;
    while (g < n) {
        std::size_t e = g + 1;
        while (e < n && keyed[e].first == keyed[g].first) ++e;
        const auto below = static_cast<double>(g);
        for (std::size_t k = g; k < e; ++k) total += a[keyed[k].second] * below;
        g = e;
    }
    return total;
}

// sum_i a_i * sum_{j : v_j < v_i} b_j
double weighted_rank_sum(std::span<const double> a, std::span<const double> b,
                         std::span<const double> values) {
    auto& keyed = sort_scratch();
    sort_by_value(values, keyed);
    const std::size_t n = keyed.size();
    double total = 0.0;
    double below = 0.0;
    std::size_t g = 0;
    while (g < n) {
        std::size_t e = g + 1;
        while (e < n && keyed[e].first == keyed[g].first) ++e;
        double group_b = 0.0;
        for (std::size_t k = g; k < e; ++k) {
            total += a[keyed[k].second] * below;
            group_b += b[keyed[k].second];
        }
        below += group_b;
        g = e;
    }
    return total;
}

double pair_normalizer(std::size_t n) {
    const auto nd = static_cast<double>(n);
    return nd * (nd - 1.0);
}

void check_phi(std::size_t expected, std::size_t got) {
    if (expected != got) {
        throw ConfigError("phi has " + std::to_string(got) + " values, expected " +
                          std::to_string(expected));
    }
}

void check_w0(const Sample& sample, std::span<const double> w0) {
    if (w0.size() != sample.w().cols()) {
        throw ConfigError("w0 has dimension " + std::to_string(w0.size()) + ", controls have " +
                          std::to_string(sample.w().cols()));
    }
}

}  // namespace

std::string_view kernel_family_name(KernelFamily family) {
    switch (family) {
        case KernelFamily::Uniform: return "uniform";
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::Epanechnikov: return "epanechnikov";
    }
    return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "uniform") return KernelFamily::Uniform;
    if (name == "gaussian") return KernelFamily::Gaussian;
    if (name == "epanechnikov") return KernelFamily::Epanechnikov;
    throw ConfigError("unknown kernel family '" + std::string(name) + "'");
}

void KernelSpec::validate(std::size_t dim) const {
    if (bandwidths.size() != dim) {
        throw ConfigError("kernel needs " + std::to_string(dim) + " bandwidths, got " +
                          std::to_string(bandwidths.size()));
    }
    for (double s : bandwidths) {
        if (!(s > 0.0)) throw ConfigError("kernel bandwidths must be positive");
    }
}

double kernel_value(KernelFamily family, double u) {
    switch (family) {
        case KernelFamily::Uniform: return std::abs(u) < 1.0 ? 1.0 : 0.0;
        case KernelFamily::Gaussian:
            return std::exp(-0.5 * u * u) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
        case KernelFamily::Epanechnikov: return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    return 0.0;
}

double kernel_weight(const KernelSpec& spec, std::span<const double> w_i, std::span<const double> w0) {
    if (w_i.size() != w0.size() || spec.bandwidths.size() != w0.size()) {
        throw ConfigError("kernel_weight: dimension mismatch");
    }
    double k = 1.0;
    for (std::size_t l = 0; l < w0.size(); ++l) {
        k *= kernel_value(spec.family, (w_i[l] - w0[l]) / spec.bandwidths[l]);
    }
    return k;
}

std::vector<std::int64_t> rank_strict_less(std::span<const double> values) {
    std::vector<Keyed> keyed;
    sort_by_value(values, keyed);
    std::vector<std::int64_t> out(values.size());
    std::size_t g = 0;
    while (g < keyed.size()) {
        std::size_t e = g + 1;
        while (e < keyed.size() && keyed[e].first == keyed[g].first) ++e;
        for (std::size_t k = g; k < e; ++k) out[keyed[k].second] = static_cast<std::int64_t>(g);
        g = e;
    }
    return out;
}

std::string_view criterion_kind_name(CriterionKind kind) {
    switch (kind) {
        case CriterionKind::Full: return "full";
        case CriterionKind::DiscreteW: return "discrete-w";
        case CriterionKind::Weighted: return "weighted";
        case CriterionKind::Pairwise: return "pairwise";
    }
    return "unknown";
}

CriterionKind parse_criterion_kind(std::string_view name) {
    if (name == "full") return CriterionKind::Full;
    if (name == "discrete-w") return CriterionKind::DiscreteW;
    if (name == "weighted") return CriterionKind::Weighted;
    if (name == "pairwise") return CriterionKind::Pairwise;
    throw ConfigError("unknown criterion variant '" + std::string(name) + "'");
}

PreparedCriterion::PreparedCriterion(const Sample& sample, CriterionSelector selector)
    : selector_(std::move(selector)) {
    const std::size_t n = sample.size();
    const auto y = sample.y();
    switch (selector_.kind) {
        case CriterionKind::Full: {
            if (n < 2) throw DataError("rank criterion needs at least two observations");
            rows_.resize(n);
            for (std::size_t i = 0; i < n; ++i) rows_[i] = i;
            a_.assign(y.begin(), y.end());
            normalizer_ = pair_normalizer(n);
            break;
        }
        case CriterionKind::DiscreteW: {
            check_w0(sample, selector_.w0);
            const Matrix& w = sample.w();
            for (std::size_t i = 0; i < n; ++i) {
                const auto wi = w.row(i);
                if (std::equal(wi.begin(), wi.end(), selector_.w0.begin())) rows_.push_back(i);
            }
            for (std::size_t i : rows_) a_.push_back(y[i]);
            empty_ = rows_.size() < 2;
            normalizer_ = pair_normalizer(rows_.size());
            break;
        }
        case CriterionKind::Weighted: {
            check_w0(sample, selector_.w0);
            selector_.kernel.validate(selector_.w0.size());
            const Matrix& w = sample.w();
            std::vector<double> k;
            for (std::size_t i = 0; i < n; ++i) {
                const double ki = kernel_weight(selector_.kernel, w.row(i), selector_.w0);
                if (ki > 0.0) {
                    rows_.push_back(i);
                    k.push_back(ki);
                }
            }
            // The uniform kernel is a window indicator: the criterion is the
            // plain rank sum over the in-window subsample.
            const bool window =
                selector_.window_fast_path && selector_.kernel.family == KernelFamily::Uniform;
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                a_.push_back(window ? y[rows_[r]] : y[rows_[r]] * k[r]);
            }
            if (!window) b_ = std::move(k);
            empty_ = rows_.size() < 2;
            if (n < 2) throw DataError("weighted rank criterion needs at least two observations");
            normalizer_ = pair_normalizer(n);
            break;
        }
        case CriterionKind::Pairwise: {
            if (n < 2) throw DataError("pairwise rank criterion needs at least two observations");
            const Matrix& w = sample.w();
            selector_.kernel.validate(w.cols());
            rows_.resize(n);
            for (std::size_t i = 0; i < n; ++i) rows_[i] = i;
            a_.assign(y.begin(), y.end());
            normalizer_ = pair_normalizer(n);
            if (n <= kDensePairLimit) {
                pair_weights_.assign(n * n, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        if (i != j) pair_weights_[i * n + j] = kernel_weight(selector_.kernel, w.row(i), w.row(j));
                    }
                }
            } else {
                w_ = w;
            }
            break;
        }
    }
}

double PreparedCriterion::pairwise_row_sum(std::size_t i, std::span<const double> phi) const {
    const std::size_t n = phi.size();
    if (!pair_weights_.empty()) {
        return kernels::masked_sum_less(std::span<const double>(pair_weights_.data() + i * n, n), phi, phi[i]);
    }
    thread_local std::vector<double> row;
    row.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        row[j] = i == j ? 0.0 : kernel_weight(selector_.kernel, w_.row(i), w_.row(j));
    }
    return kernels::masked_sum_less(row, phi, phi[i]);
}

double PreparedCriterion::operator()(std::span<const double> phi_active) const {
    check_phi(rows_.size(), phi_active.size());
    if (empty_) return 0.0;
    double total = 0.0;
    if (selector_.kind == CriterionKind::Pairwise) {
        for (std::size_t i = 0; i < phi_active.size(); ++i) {
            if (a_[i] != 0.0) total += a_[i] * pairwise_row_sum(i, phi_active);
        }
    } else if (b_.empty()) {
        total = unit_rank_sum(a_, phi_active);
    } else {
        total = weighted_rank_sum(a_, b_, phi_active);
    }
    return total / normalizer_;
}

double rank_criterion(const Sample& sample, std::span<const double> phi) {
    check_phi(sample.size(), phi.size());
    return PreparedCriterion(sample, {})(phi);
}

namespace {

CriterionValue evaluate_on_rows(const PreparedCriterion& crit, std::span<const double> phi) {
    std::vector<double> active(crit.rows().size());
    for (std::size_t r = 0; r < active.size(); ++r) active[r] = phi[crit.rows()[r]];
    return {crit(active), crit.empty()};
}

}  // namespace

CriterionValue rank_criterion_discrete_w(const Sample& sample, std::span<const double> phi,
                                         std::span<const double> w0) {
    check_phi(sample.size(), phi.size());
    CriterionSelector sel{CriterionKind::DiscreteW, {w0.begin(), w0.end()}, {}, true};
    return evaluate_on_rows(PreparedCriterion(sample, std::move(sel)), phi);
}

CriterionValue rank_criterion_weighted(const Sample& sample, std::span<const double> phi,
                                       std::span<const double> w0, const KernelSpec& spec) {
    check_phi(sample.size(), phi.size());
    CriterionSelector sel{CriterionKind::Weighted, {w0.begin(), w0.end()}, spec, true};
    return evaluate_on_rows(PreparedCriterion(sample, std::move(sel)), phi);
}

double rank_criterion_pairwise(const Sample& sample, std::span<const double> phi,
                               const KernelSpec& spec) {
    check_phi(sample.size(), phi.size());
    CriterionSelector sel{CriterionKind::Pairwise, {}, spec, true};
    return PreparedCriterion(sample, std::move(sel))(phi);
}

}  // namespace sieverank
