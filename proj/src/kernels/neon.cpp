#include "sieverank/kernels.hpp"

#include <arm_neon.h>

#include <cassert>

namespace sieverank::kernels::neon {

void affine_columns(std::span<const double> offset, std::span<const double> columns,
                    std::span<const double> coeffs, std::span<double> out) {
    const std::size_t n = out.size();
    assert(offset.size() == n && columns.size() == n * coeffs.size());
    const std::size_t n2 = n - n % 2;
    const std::size_t kk = coeffs.size();
    for (std::size_t i = 0; i < n2; i += 2) {
        float64x2_t acc = vld1q_f64(offset.data() + i);
        for (std::size_t k = 0; k < kk; ++k) {
            const float64x2_t c = vdupq_n_f64(coeffs[k]);
            const float64x2_t x = vld1q_f64(columns.data() + k * n + i);
            acc = vaddq_f64(acc, vmulq_f64(c, x));
        }
        vst1q_f64(out.data() + i, acc);
    }
    for (std::size_t i = n2; i < n; ++i) {
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
    const float64x2_t t = vdupq_n_f64(threshold);
    // acc[q] holds lanes 2q and 2q+1 of the eight-lane reference accumulator.
    float64x2_t acc[4] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0),
                          vdupq_n_f64(0.0)};
    for (std::size_t j = 0; j < n8; j += 8) {
        for (std::size_t q = 0; q < 4; ++q) {
            const float64x2_t v = vld1q_f64(values.data() + j + 2 * q);
            const float64x2_t w = vld1q_f64(weights.data() + j + 2 * q);
            const uint64x2_t mask = vcltq_f64(v, t);
            const float64x2_t masked =
                vreinterpretq_f64_u64(vandq_u64(mask, vreinterpretq_u64_f64(w)));
            acc[q] = vaddq_f64(acc[q], masked);
        }
    }
    const float64x2_t t01 = vaddq_f64(acc[0], acc[2]);
    const float64x2_t t23 = vaddq_f64(acc[1], acc[3]);
    double total = (vgetq_lane_f64(t01, 0) + vgetq_lane_f64(t01, 1)) +
                   (vgetq_lane_f64(t23, 0) + vgetq_lane_f64(t23, 1));
    for (std::size_t j = n8; j < n; ++j) {
        if (values[j] < threshold) total += weights[j];
    }
    return total;
}

}  // namespace sieverank::kernels::neon
