#pragma once

// Batch kernels for the inner loops of the quadrature: the exit-point current
// evaluated over a panel of times, and cos/sin over a panel of angles.
// Each kernel has a scalar reference and, on x86-64, an AVX2+FMA variant chosen
// at runtime. The variants agree to a few ulp; see tests/unit/test_simd.cpp.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string_view>

#include "qclock/physics_config.hpp"

namespace qclock::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Best variant this CPU (and this build) supports.
Isa detected_isa();
/// Variant used by the dispatching entry points.
Isa active_isa();
/// Pin the dispatching entry points to one variant. Throws DomainError when unsupported.
void force_isa(Isa isa);

/// Everything the exit-point current needs, pre-reduced to the combinations the kernel uses.
struct ExitCurrentParams {
    double d;
    double u;
    double sigma0;
    double hbar_over_m;
    double two_omega;

    static ExitCurrentParams from(const PhysicsConfig& cfg) {
        return ExitCurrentParams{cfg.d, cfg.u, cfg.sigma0, cfg.hbar / cfg.m0, 2.0 * cfg.omega()};
    }
};

struct ExitCurrentPoint {
    double jx;
    double jz;
    double modulus;
};

inline constexpr double exponent_floor = -700.0;

/// Reference evaluation at one instant; the scalar batch kernel loops over exactly this.
inline ExitCurrentPoint exit_current_point(const ExitCurrentParams& p, double t) {
    const double s02 = p.sigma0 * p.sigma0;
    const double spread = p.hbar_over_m * t / (2.0 * s02);
    const double sigma_t2 = s02 * (1.0 + spread * spread);
    const double lag = p.d - p.u * t;
    const double exponent = -(lag * lag) / (2.0 * sigma_t2);
    if (exponent < exponent_floor) {
        return {0.0, 0.0, 0.0};
    }
    const double density = std::exp(exponent) / std::sqrt(2.0 * std::numbers::pi * sigma_t2);
    const double a2t = p.hbar_over_m * p.hbar_over_m * t;
    const double velocity = p.u + lag * a2t / (4.0 * s02 * s02 + a2t * t);
    const double jx = density * velocity;
    const double jz = density * (p.hbar_over_m * (-lag) / (2.0 * sigma_t2)) * std::sin(p.two_omega * t);

    const double big = std::max(std::abs(jx), std::abs(jz));
    const double small = std::min(std::abs(jx), std::abs(jz));
    double modulus = 0.0;
    if (big > 0.0) {
        const double ratio = small / big;
        modulus = big * std::sqrt(1.0 + ratio * ratio);
    }
    return {jx, jz, modulus};
}

// All spans in one call must have equal length.

namespace scalar {
void exit_current(const ExitCurrentParams& p, std::span<const double> t, std::span<double> jx,
                  std::span<double> jz, std::span<double> modulus);
void cos_sin(std::span<const double> x, std::span<double> c, std::span<double> s);
} // namespace scalar

#if defined(QCLOCK_HAVE_AVX2)
namespace avx2 {
void exit_current(const ExitCurrentParams& p, std::span<const double> t, std::span<double> jx,
                  std::span<double> jz, std::span<double> modulus);
void cos_sin(std::span<const double> x, std::span<double> c, std::span<double> s);
} // namespace avx2
#endif

void exit_current(const ExitCurrentParams& p, std::span<const double> t, std::span<double> jx,
                  std::span<double> jz, std::span<double> modulus);
void cos_sin(std::span<const double> x, std::span<double> c, std::span<double> s);

} // namespace qclock::simd
