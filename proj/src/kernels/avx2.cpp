#include "sieverank/kernels.hpp"

#include <immintrin.h>

#include <cassert>

namespace sieverank::kernels::avx2 {

void affine_columns(std::span<const double> offset, std::span<const double> columns,
                    std::span<const double> coeffs, std::span<double> out) {
    const std::size_t n = out.size();
    assert(offset.size() == n && columns.size() == n * coeffs.size());
    const std::size_t n4 = n - n % 4;
    const std::size_t kk = coeffs.size();
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d acc = _mm256_loadu_pd(offset.data() + i);
        for (std::size_t k = 0; k < kk; ++k) {
            const __m256d c = _mm256_set1_pd(coeffs[k]);
            const __m256d x = _mm256_loadu_pd(columns.data() + k * n + i);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(c, x));
        }
        _mm256_storeu_pd(out.data() + i, acc);
    }
    for (std::size_t i = n4; i < n; ++i) {
        double acc = offset[i];
        for (std::size_t k = 0; k < kk; ++k) acc = acc + coeffs[k] * columns[k * n + i];
        out[i] = acc;
    }
}

double masked_sum_less(std::span<const double> weights, std::span<const double> values,
                       double threshold) {
    assert(weights.size() == values.size());
    const std::size_t n = values.size();
    const std::size_t n8 = n - n % 8;
    const __m256d t = _mm256_set1_pd(threshold);
    __m256d lo = _mm256_setzero_pd();
    __m256d hi = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n8; j += 8) {
        const __m256d v0 = _mm256_loadu_pd(values.data() + j);
        const __m256d v1 = _mm256_loadu_pd(values.data() + j + 4);
        const __m256d w0 = _mm256_loadu_pd(weights.data() + j);
        const __m256d w1 = _mm256_loadu_pd(weights.data() + j + 4);
        lo = _mm256_add_pd(lo, _mm256_and_pd(_mm256_cmp_pd(v0, t, _CMP_LT_OQ), w0));
        hi = _mm256_add_pd(hi, _mm256_and_pd(_mm256_cmp_pd(v1, t, _CMP_LT_OQ), w1));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, _mm256_add_pd(lo, hi));
    double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (std::size_t j = n8; j < n; ++j) {
        if (values[j] < threshold) total += weights[j];
    }
    return total;
}

}  // namespace sieverank::kernels::avx2
