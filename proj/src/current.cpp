#include "qclock/current.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "qclock/errors.hpp"
#include "qclock/simd/kernels.hpp"
#include "qclock/wavepacket.hpp"

namespace qclock::current {

namespace {

double modulus_of(double a, double b) {
    return std::hypot(a, b);
}

} // namespace

Vec3 spin_current(const Vec3& g, const spin::SpinVector& s, double m0) {
    return Vec3{(g.y * s.sz - g.z * s.sy) / m0, (g.z * s.sx - g.x * s.sz) / m0, (g.x * s.sy - g.y * s.sx) / m0};
}

CurrentVector current_general_vector(const PhysicsConfig& cfg, double x, double t, const spin::SpinState& chi) {
    const std::complex<double> amplitude = wavepacket::psi(cfg, x, t);
    const std::complex<double> gradient = wavepacket::dpsi_dx(cfg, x, t);
    const std::complex<double> minus_i{0.0, -1.0};

    const std::complex<double> flux = std::conj(amplitude) * (minus_i * cfg.hbar / cfg.m0) * gradient;
    const double grad_rho = 2.0 * (std::conj(amplitude) * gradient).real();

    CurrentVector out;
    out.schrodinger = Vec3{flux.real(), 0.0, 0.0};
    out.spin = spin_current(Vec3{grad_rho, 0.0, 0.0}, spin::bloch(chi, cfg.hbar), cfg.m0);
    return out;
}

CurrentSample current_general(const PhysicsConfig& cfg, double x, double t, const spin::SpinState& chi) {
    const CurrentVector v = current_general_vector(cfg, x, t, chi);
    const double jx = v.schrodinger.x + v.spin.x;
    const double jz = v.schrodinger.z + v.spin.z;
    const double modulus = modulus_of(jx, jz);
#ifndef NDEBUG
    // chi in the xy-plane: the spin term has no y component worth the name.
    if (std::abs(spin::bloch(chi, cfg.hbar).sz) <= 1e-12 * cfg.hbar) {
        assert(std::abs(v.spin.y) <= 1e-14 * modulus);
    }
#endif
    return CurrentSample{jx, jz, modulus};
}

CurrentSample current_at_exit(const PhysicsConfig& cfg, double t) {
    if (!(t >= 0.0)) {
        throw DomainError("current_at_exit: time must be non-negative");
    }
    const auto point = simd::exit_current_point(simd::ExitCurrentParams::from(cfg), t);
    return CurrentSample{point.jx, point.jz, point.modulus};
}

CurrentSample current_of_phi(const PhysicsConfig& cfg, double phi) {
    if (!(phi >= 0.0 && phi <= 2.0 * std::numbers::pi)) {
        throw DomainError("current_of_phi: phi must lie in [0, 2 pi]");
    }
    return current_at_exit(cfg, phi / (2.0 * cfg.omega()));
}

} // namespace qclock::current
