#include <atomic>
#include <cstdlib>
#include <string>

#include "sieverank/errors.hpp"
#include "sieverank/kernels.hpp"

namespace sieverank::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(SIEVERANK_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("SIEVERANK_ISA")) {
        if (std::string(env) == "scalar") return Isa::Scalar;
    }
    if (cpu_has_avx2()) return Isa::Avx2;
#if defined(SIEVERANK_HAVE_NEON_KERNELS)
    return Isa::Neon;
#else
    return Isa::Scalar;
#endif
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2: return cpu_has_avx2();
        case Isa::Neon:
#if defined(SIEVERANK_HAVE_NEON_KERNELS)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw ConfigError("kernel ISA '" + std::string(isa_name(isa)) + "' is not supported here");
    }
    current().store(isa, std::memory_order_relaxed);
}

void affine_columns(std::span<const double> offset, std::span<const double> columns,
                    std::span<const double> coeffs, std::span<double> out) {
    switch (active_isa()) {
#if defined(SIEVERANK_HAVE_AVX2_KERNELS)
        case Isa::Avx2: return avx2::affine_columns(offset, columns, coeffs, out);
#endif
#if defined(SIEVERANK_HAVE_NEON_KERNELS)
        case Isa::Neon: return neon::affine_columns(offset, columns, coeffs, out);
#endif
        default: return scalar::affine_columns(offset, columns, coeffs, out);
    }
}

double masked_sum_less(std::span<const double> weights, std::span<const double> values,
                       double threshold) {
    switch (active_isa()) {
#if defined(SIEVERANK_HAVE_AVX2_KERNELS)
        case Isa::Avx2: return avx2::masked_sum_less(weights, values, threshold);
#endif
#if defined(SIEVERANK_HAVE_NEON_KERNELS)
        case Isa::Neon: return neon::masked_sum_less(weights, values, threshold);
#endif
        default: return scalar::masked_sum_less(weights, values, threshold);
    }
}

}  // namespace sieverank::kernels
