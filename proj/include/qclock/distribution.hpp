#pragma once

#include <iosfwd>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qclock/physics_config.hpp"
#include "qclock/quadrature.hpp"

namespace qclock::distribution {

/// How the arrival-time density at the rotator exit is postulated.
enum class ArrivalScheme {
    modulus_total_current,        // |J_Sch + J_Spin|
    modulus_schrodinger_current,  // |J_Sch|
    semiclassical_delta,          // every spin rotates by the peak's transit angle
};

std::string_view scheme_name(ArrivalScheme scheme);
/// Accepts the short names ("total", "schrodinger", "semiclassical") and the long names.
std::optional<ArrivalScheme> parse_scheme(std::string_view text);

inline constexpr std::size_t default_output_points = 4096;
inline constexpr double tail_warning_threshold = 1e-6;
inline constexpr double normalization_tolerance = 1e-8;

/// Unnormalized arrival-time density at time t in [0, pi/omega], in 1/s.
/// Throws UnsupportedOperation for the semiclassical scheme.
double pi_of_t(const PhysicsConfig& cfg, ArrivalScheme scheme, double t);

/// Normalized density of emergent spin azimuths on [0, 2 pi]. Immutable once built.
class AngularDistribution {
public:
    /// Wrap an arbitrary non-negative density (not necessarily normalized) on [0, 2 pi].
    /// `hints` locate structure narrower than the interval for the integrator.
    static AngularDistribution from_density(quadrature::BatchIntegrand raw_density, std::vector<double> hints,
                                            const quadrature::QuadratureSpec& quad,
                                            std::size_t output_points = default_output_points);

    /// Normalized density at phi; zero outside [0, 2 pi].
    double density_at(double phi) const;
    void density(std::span<const double> phi, std::span<double> out) const;

    /// Adaptive quadrature nodes merged with the uniform output grid.
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    /// Uniform grid over [0, 2 pi] for plotting.
    const std::vector<double>& output_grid() const { return output_grid_; }
    std::vector<double> output_values() const;

    /// Independent re-integration of the normalized density.
    double norm_check() const { return norm_check_; }
    /// Integral of the raw density over [0, 2 pi], before normalization.
    double normalization() const { return normalization_; }
    /// Fraction of raw weight that falls beyond phi = 2 pi and is discarded.
    double tail_mass() const { return tail_mass_; }

    const std::vector<double>& hints() const { return hints_; }
    const quadrature::QuadratureSpec& quad() const { return quad_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Present when built by pi_of_phi.
    const std::optional<PhysicsConfig>& physics() const { return physics_; }
    const std::optional<ArrivalScheme>& scheme() const { return scheme_; }

private:
    AngularDistribution() = default;

    std::shared_ptr<const quadrature::BatchIntegrand> raw_;
    double normalization_ = 0.0;
    double norm_check_ = 0.0;
    double tail_mass_ = 0.0;
    std::vector<double> hints_;
    quadrature::QuadratureSpec quad_;
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> output_grid_;
    std::vector<std::string> warnings_;
    std::optional<PhysicsConfig> physics_;
    std::optional<ArrivalScheme> scheme_;

    friend AngularDistribution pi_of_phi(const PhysicsConfig&, ArrivalScheme, const quadrature::QuadratureSpec&,
                                         std::size_t);
};

/// Split points bracketing the spike at the peak transit angle, spaced by its width.
std::vector<double> peak_hints(const PhysicsConfig& cfg, double upper = 2.0 * std::numbers::pi);

/// Normalized |J(X, phi)| for the chosen scheme.
/// Throws ValidationError, UnsupportedOperation (delta scheme), ConvergenceError, DegenerateDistribution.
AngularDistribution pi_of_phi(const PhysicsConfig& cfg, ArrivalScheme scheme, const quadrature::QuadratureSpec& quad,
                              std::size_t output_points = default_output_points);

/// Location of the global maximum, refined by golden-section search.
double peak_phi(const AngularDistribution& dist);

/// Second central moment in rad^2.
double variance_phi(const AngularDistribution& dist);

/// Two-column CSV (phi_rad, density_per_rad) on the output grid, preceded by `#` metadata.
void write_csv(std::ostream& out, const AngularDistribution& dist);

} // namespace qclock::distribution
