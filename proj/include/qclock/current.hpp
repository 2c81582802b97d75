#pragma once

#include "qclock/physics_config.hpp"
#include "qclock/spin.hpp"

namespace qclock::current {

/// Current density at the exit point. The y component vanishes identically in
/// this geometry (grad rho along x, spin in the xy-plane) and is not stored.
struct CurrentSample {
    double jx_sch = 0.0;  // cm/s * cm^-1
    double jz_spin = 0.0;
    double modulus = 0.0;
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Both pieces of the spin-augmented current as full 3-vectors.
struct CurrentVector {
    Vec3 schrodinger;
    Vec3 spin;

    Vec3 total() const {
        return {schrodinger.x + spin.x, schrodinger.y + spin.y, schrodinger.z + spin.z};
    }
};

/// (1/m0) grad(rho) x s for an arbitrary density gradient.
Vec3 spin_current(const Vec3& grad_rho, const spin::SpinVector& s, double m0);

/// Re[psi* (-i hbar/m0) grad psi] + (1/m0) grad(rho) x s, built from the amplitude and its gradient.
CurrentVector current_general_vector(const PhysicsConfig& cfg, double x, double t, const spin::SpinState& chi);

/// Projection of current_general_vector onto the measured (x, z) components.
CurrentSample current_general(const PhysicsConfig& cfg, double x, double t, const spin::SpinState& chi);

/// Closed form at X = (d, 0, 0) with chi = evolve(omega, t).
CurrentSample current_at_exit(const PhysicsConfig& cfg, double t);

/// current_at_exit at t = phi / (2 omega); phi must lie in [0, 2 pi].
CurrentSample current_of_phi(const PhysicsConfig& cfg, double phi);

} // namespace qclock::current
