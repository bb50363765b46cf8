#include "sieverank/kernels.hpp"

#include <cassert>

namespace sieverank::kernels::scalar {

void affine_columns(std::span<const double> offset, std::span<const double> columns,
                    std::span<const double> coeffs, std::span<double> out) {
    const std::size_t n = out.size();
    assert(offset.size() == n && columns.size() == n * coeffs.size());
    for (std::size_t i = 0; i < n; ++i) out[i] = offset[i];
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double c = coeffs[k];
        const double* col = columns.data() + k * n;
        for (std::size_t i = 0; i < n; ++i) out[i] = out[i] + c * col[i];
    }
}

double masked_sum_less(std::span<const double> weights, std::span<const double> values,
                       double threshold) {
    assert(weights.size() == values.size());
    const std::size_t n = values.size();
    const std::size_t n8 = n - n % 8;
    double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    for (std::size_t j = 0; j < n8; j += 8) {
        for (std::size_t l = 0; l < 8; ++l) {
            lane[l] += values[j + l] < threshold ? weights[j + l] : 0.0;
        }
    }
    const double t0 = lane[0] + lane[4];
    const double t1 = lane[1] + lane[5];
    const double t2 = lane[2] + lane[6];
    const double t3 = lane[3] + lane[7];
    double total = (t0 + t1) + (t2 + t3);
    for (std::size_t j = n8; j < n; ++j) {
        if (values[j] < threshold) total += weights[j];
    }
    return total;
}

}  // namespace sieverank::kernels::scalar
