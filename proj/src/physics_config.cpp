#include "qclock/physics_config.hpp"

#include <cmath>
#include <string>

#include "qclock/errors.hpp"
#include "qclock/wavepacket.hpp"

namespace qclock {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || !(value > 0.0)) {
        throw ValidationError(std::string(name) + " must be positive");
    }
}

} // namespace

void PhysicsConfig::validate() const {
    require_positive(hbar, "hbar");
    require_positive(m0, "m0");
    require_positive(mu, "mu");
    require_positive(sigma0, "sigma0");
    require_positive(u, "u");
    require_positive(d, "d");
    require_positive(B, "B");

    const double k = wave_number();
    if (!std::isfinite(k) || !(k > 0.0)) {
        throw ValidationError("wave number m0 u / hbar must be finite and positive");
    }
    const double w = omega();
    if (!std::isfinite(w) || !(w > 0.0)) {
        throw ValidationError("Larmor rate mu B / hbar must be finite and positive");
    }
    const double exit_width = wavepacket::width(*this, transit_time()).sigma_t;
    if (!(exit_width < 0.5 * d)) {
        throw ValidationError("packet width at the exit (" + std::to_string(exit_width) +
                              " cm) must be below d/2");
    }
}

double derived_default_moment(double hbar) {
    constexpr double d = 1.0;
    constexpr double u = 3e5;
    constexpr double B = 10.0;
    const double omega = deg_to_rad(constants::set_one_peak_deg) * u / (2.0 * d);
    return hbar * omega / B;
}

PhysicsConfig preset_one() {
    PhysicsConfig cfg;
    cfg.mu = derived_default_moment(cfg.hbar);
    return cfg;
}

PhysicsConfig preset_two() {
    PhysicsConfig cfg = preset_one();
    cfg.d = 2.0;
    return cfg;
}

} // namespace qclock
