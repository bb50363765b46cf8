#pragma once

// Data-parallel inner loops of the estimator.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, a vector implementation (AVX2 on x86-64, NEON on AArch64).
// The vector variants reproduce the reference bit for bit: no fused
// multiply-add, and reductions use the same eight-lane accumulation order
// in both paths. The variant is picked once at startup from CPUID; set
// SIEVERANK_ISA=scalar in the environment to force the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace sieverank::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

/// ISA used by the dispatching entry points below.
Isa active_isa();

/// Overrides the dispatch choice; throws ConfigError if the CPU lacks `isa`.
void set_active_isa(Isa isa);

/// out[i] = offset[i] + sum_k coeffs[k] * columns[k * n + i], with n = out.size().
/// `columns` is a column-major n x K block. Terms are accumulated in k order.
void affine_columns(std::span<const double> offset, std::span<const double> columns,
                    std::span<const double> coeffs, std::span<double> out);

/// sum_j weights[j] * [values[j] < threshold].
double masked_sum_less(std::span<const double> weights, std::span<const double> values,
                       double threshold);

/// Fixed-ISA implementations, exposed for equivalence testing and benchmarks.
namespace scalar {
void affine_columns(std::span<const double> offset, std::span<const double> columns,
                    std::span<const double> coeffs, std::span<double> out);
double masked_sum_less(std::span<const double> weights, std::span<const double> values,
                       double threshold);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SIEVERANK_HAVE_AVX2_KERNELS 1
namespace avx2 {
void affine_columns(std::span<const double> offset, std::span<const double> columns,
                    std::span<const double> coeffs, std::span<double> out);
double masked_sum_less(std::span<const double> weights, std::span<const double> values,
                       double threshold);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define SIEVERANK_HAVE_NEON_KERNELS 1
namespace neon {
void affine_columns(std::span<const double> offset, std::span<const double> columns,
                    std::span<const double> coeffs, std::span<double> out);
double masked_sum_less(std::span<const double> weights, std::span<const double> values,
                       double threshold);
}  // namespace neon
#endif

}  // namespace sieverank::kernels
