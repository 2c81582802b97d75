#include <cmath>

#include "qclock/simd/kernels.hpp"

namespace qclock::simd::scalar {

void exit_current(const ExitCurrentParams& p, std::span<const double> t, std::span<double> jx,
                  std::span<double> jz, std::span<double> modulus) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto point = exit_current_point(p, t[i]);
        jx[i] = point.jx;
        jz[i] = point.jz;
        modulus[i] = point.modulus;
    }
}

void cos_sin(std::span<const double> x, std::span<double> c, std::span<double> s) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        c[i] = std::cos(x[i]);
        s[i] = std::sin(x[i]);
    }
}

} // namespace qclock::simd::scalar
