#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

#include "qclock/distribution.hpp"
#include "qclock/spin.hpp"

namespace qclock::measurement {

/// 2x2 density matrix in the z basis, entries [row][col].
class DensityMatrix2 {
public:
    using Matrix = std::array<std::array<std::complex<double>, 2>, 2>;

    explicit DensityMatrix2(const Matrix& entries) : m_(entries) {}

    /// |chi><chi|
    static DensityMatrix2 projector(const spin::SpinState& chi);

    const std::complex<double>& operator()(int row, int col) const { return m_[row][col]; }

    std::complex<double> trace() const { return m_[0][0] + m_[1][1]; }
    /// Tr(W^2)
    double purity() const;
    /// Ascending eigenvalues of the Hermitian part.
    std::array<double, 2> eigenvalues() const;
    /// Largest |W_ij - conj(W_ji)|.
    double hermiticity_defect() const;
    /// Tr(W |chi><chi|) = <chi|W|chi>
    double expectation(const spin::SpinState& chi) const;

    /// Hermitian within 1e-12, trace 1 within 1e-8, eigenvalues >= -1e-12. Throws InvariantViolation.
    void check_invariants() const;

private:
    Matrix m_;
};

struct MeasurementResult {
    double theta;  // rad
    double p_plus;
    double p_minus;
};

/// Integral of Pi(phi) cos^2((theta - phi)/2) over [0, 2 pi].
double p_plus(const distribution::AngularDistribution& dist, double theta, const quadrature::QuadratureSpec& quad);
/// Integral of Pi(phi) sin^2((theta - phi)/2) over [0, 2 pi].
double p_minus(const distribution::AngularDistribution& dist, double theta, const quadrature::QuadratureSpec& quad);

/// Both probabilities, each from its own quadrature.
MeasurementResult measure(const distribution::AngularDistribution& dist, double theta,
                          const quadrature::QuadratureSpec& quad);

/// All spins rotated by the peak transit angle 2 omega d / u.
MeasurementResult semiclassical_prediction(const PhysicsConfig& cfg, double theta);

/// Integral of Pi(phi) |chi(phi)><chi(phi)|, entry by entry.
DensityMatrix2 density_matrix(const distribution::AngularDistribution& dist, const quadrature::QuadratureSpec& quad);

struct DeviationRow {
    double theta;  // rad
    double p_plus;
    double p_minus;
    double p_plus_semiclassical;
    double delta;  // p_plus_semiclassical - p_plus
};

/// Quantum scheme against the semiclassical baseline for each theta (rad).
std::vector<DeviationRow> deviation_report(const PhysicsConfig& cfg, distribution::ArrivalScheme scheme,
                                           const std::vector<double>& thetas, const quadrature::QuadratureSpec& quad);

/// Rounds half away from zero to `decimals` places.
double round_half_away(double value, int decimals);

/// CSV with columns theta_deg, p_plus, p_minus, p_plus_sc, delta.
void write_csv(std::ostream& out, const std::vector<DeviationRow>& rows);

} // namespace qclock::measurement
