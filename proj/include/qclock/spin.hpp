#pragma once

#include <complex>

namespace qclock::spin {

/// Normalized spin-1/2 state in the z basis.
struct SpinState {
    std::complex<double> up;
    std::complex<double> down;

    double norm_squared() const { return std::norm(up) + std::norm(down); }
};

/// Expectation of the spin operator, (hbar/2) chi^dagger sigma chi, in erg s.
struct SpinVector {
    double sx = 0.0;
    double sy = 0.0;
    double sz = 0.0;

    double magnitude() const;
};

inline constexpr double normalization_tolerance = 1e-12;

/// x-polarized state (|up> + |down>) / sqrt(2).
SpinState initial_state();

/// Precession under mu sigma.B with B along z, keeping the exp(-i omega t) global phase.
SpinState evolve(double omega, double t);

/// Throws InvariantViolation for a state that is not normalized.
SpinVector bloch(const SpinState& chi, double hbar);

/// xy-plane state at azimuth phi: (|up> + e^{i phi} |down>) / sqrt(2).
SpinState chi_of_phi(double phi);

/// <a|b>
std::complex<double> overlap(const SpinState& a, const SpinState& b);

} // namespace qclock::spin
