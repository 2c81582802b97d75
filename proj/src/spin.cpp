#include "qclock/spin.hpp"

#include <cmath>
#include <numbers>

#include "qclock/errors.hpp"

namespace qclock::spin {

double SpinVector::magnitude() const {
    return std::sqrt(sx * sx + sy * sy + sz * sz);
}

SpinState initial_state() {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    return SpinState{{h, 0.0}, {h, 0.0}};
}

SpinState evolve(double omega, double t) {
    if (!(t >= 0.0)) {
        throw DomainError("evolve: time must be non-negative");
    }
    constexpr double h = std::numbers::sqrt2 / 2.0;
    const double angle = omega * t;
    const std::complex<double> global = std::polar(h, -angle);
    return SpinState{global, global * std::polar(1.0, 2.0 * angle)};
}

SpinVector bloch(const SpinState& chi, double hbar) {
    if (std::abs(chi.norm_squared() - 1.0) > normalization_tolerance) {
        throw InvariantViolation("bloch: spin state is not normalized");
    }
    const std::complex<double> coherence = std::conj(chi.up) * chi.down;
    const double half = 0.5 * hbar;
    return SpinVector{half * 2.0 * coherence.real(), half * 2.0 * coherence.imag(),
                      half * (std::norm(chi.up) - std::norm(chi.down))};
}

SpinState chi_of_phi(double phi) {
    constexpr double h = std::numbers::sqrt2 / 2.0;
    return SpinState{{h, 0.0}, std::polar(h, phi)};
}

std::complex<double> overlap(const SpinState& a, const SpinState& b) {
    return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

} // namespace qclock::spin
