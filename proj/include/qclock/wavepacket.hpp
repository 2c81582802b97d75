#pragma once

#include <complex>

#include "qclock/physics_config.hpp"

namespace qclock::wavepacket {

/// Width of the freely spreading packet at time t.
struct PacketWidth {
    double sigma_t;            // cm, |a_t|
    std::complex<double> a_t;  // cm, sigma0 (1 + i hbar t / (2 m0 sigma0^2))
};

/// Below this exponent rho returns exactly zero and psi throws.
inline constexpr double exponent_floor = -700.0;

PacketWidth width(const PhysicsConfig& cfg, double t);

/// Time-evolved amplitude of the initially minimal Gaussian, in cm^-1/2.
/// Throws NumericRangeError when the envelope exponent drops below exponent_floor.
std::complex<double> psi(const PhysicsConfig& cfg, double x, double t);

/// Spatial derivative of psi, evaluated analytically.
std::complex<double> dpsi_dx(const PhysicsConfig& cfg, double x, double t);

/// Position density; exact zero in the far tails.
double rho(const PhysicsConfig& cfg, double x, double t);

/// Analytic d rho / dx.
double drho_dx(const PhysicsConfig& cfg, double x, double t);

} // namespace qclock::wavepacket
