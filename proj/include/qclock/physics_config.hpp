#pragma once

#include <numbers>

namespace qclock {

// CGS throughout: cm, g, s, erg, gauss.
namespace constants {

inline constexpr double hbar = 1.054571817e-27;          // erg s
inline constexpr double neutron_mass = 1.67492749804e-24; // g
inline constexpr double neutron_moment_codata = 9.6623651e-24; // erg/gauss, magnitude

// Set I reports its peak at this rotation angle; the default moment is chosen so
// that 2 mu B d / (hbar u) lands there exactly.
inline constexpr double set_one_peak_deg = 34.94767;

} // namespace constants

inline constexpr double deg_to_rad(double deg) { return deg * (std::numbers::pi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / std::numbers::pi); }

/// Physical constants plus spin-rotator and packet parameters.
struct PhysicsConfig {
    double hbar = constants::hbar;
    double m0 = constants::neutron_mass;
    double mu = 0.0;      // erg/gauss
    double sigma0 = 1e-5; // cm
    double u = 3e5;       // cm/s
    double d = 1.0;       // cm
    double B = 10.0;      // gauss

    double wave_number() const { return m0 * u / hbar; }
    /// Larmor rate mu B / hbar; the spin azimuth advances at twice this rate.
    double omega() const { return mu * B / hbar; }
    double transit_time() const { return d / u; }
    /// Rotation angle accumulated by the packet peak, 2 omega d / u.
    double peak_phi() const { return 2.0 * omega() * d / u; }

    /// Throws ValidationError naming the first violated rule.
    void validate() const;

    bool operator==(const PhysicsConfig&) const = default;
};

/// mu such that set I (d = 1 cm, u = 3e5 cm/s, B = 10 G) peaks at 34.94767 degrees.
double derived_default_moment(double hbar = constants::hbar);

/// d = 1 cm, u = 3e5 cm/s, B = 10 G, sigma0 = 1e-5 cm.
PhysicsConfig preset_one();
/// As set I with d = 2 cm.
PhysicsConfig preset_two();

} // namespace qclock
