#include "qclock/wavepacket.hpp"

#include <cmath>
#include <numbers>

#include "qclock/errors.hpp"

namespace qclock::wavepacket {

namespace {

void require_nonnegative_time(double t) {
    if (!(t >= 0.0)) {
        throw DomainError("time must be non-negative");
    }
}

// hbar t / (2 m0 sigma0^2): the dimensionless spreading factor.
double spread(const PhysicsConfig& cfg, double t) {
    return cfg.hbar * t / (2.0 * cfg.m0 * cfg.sigma0 * cfg.sigma0);
}

std::complex<double> log_derivative(const PhysicsConfig& cfg, double x, double t,
                                    std::complex<double> a_t) {
    const std::complex<double> i{0.0, 1.0};
    return -(x - cfg.u * t) / (2.0 * a_t * cfg.sigma0) + i * cfg.wave_number();
}

} // namespace

PacketWidth width(const PhysicsConfig& cfg, double t) {
    require_nonnegative_time(t);
    const double s = spread(cfg, t);
    return PacketWidth{cfg.sigma0 * std::hypot(1.0, s), std::complex<double>{cfg.sigma0, cfg.sigma0 * s}};
}

std::complex<double> psi(const PhysicsConfig& cfg, double x, double t) {
    const auto w = width(cfg, t);
    const std::complex<double> i{0.0, 1.0};
    const double offset = x - cfg.u * t;

    const std::complex<double> exponent =
        -(offset * offset) / (4.0 * w.a_t * cfg.sigma0) + i * cfg.wave_number() * (x - 0.5 * cfg.u * t);
    if (exponent.real() < exponent_floor) {
        throw NumericRangeError("psi envelope exponent below representable range");
    }

    // (2 pi a_t^2)^(-1/4); Re a_t > 0 keeps the principal branch continuous in t.
    const std::complex<double> prefactor =
        std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-0.5 * std::log(w.a_t));
    const std::complex<double> value = prefactor * std::exp(exponent);
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw NumericRangeError("psi evaluated to a non-finite value");
    }
    return value;
}

std::complex<double> dpsi_dx(const PhysicsConfig& cfg, double x, double t) {
    const auto value = psi(cfg, x, t);
    return value * log_derivative(cfg, x, t, width(cfg, t).a_t);
}

double rho(const PhysicsConfig& cfg, double x, double t) {
    const double sigma_t = width(cfg, t).sigma_t;
    const double offset = x - cfg.u * t;
    const double exponent = -(offset * offset) / (2.0 * sigma_t * sigma_t);
    if (exponent < exponent_floor) {
        return 0.0;
    }
    return std::exp(exponent) / (std::sqrt(2.0 * std::numbers::pi) * sigma_t);
}

double drho_dx(const PhysicsConfig& cfg, double x, double t) {
    const double sigma_t = width(cfg, t).sigma_t;
    return -rho(cfg, x, t) * (x - cfg.u * t) / (sigma_t * sigma_t);
}

} // namespace qclock::wavepacket
