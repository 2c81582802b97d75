#include "qclock/measurement.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "qclock/errors.hpp"
#include "qclock/simd/kernels.hpp"

namespace qclock::measurement {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Pi(phi) cos^2((theta - phi)/2) for sign > 0, sin^2 otherwise. The half-angle
// form keeps full relative precision where the projector is nearly zero.
double weighted_projection(const distribution::AngularDistribution& dist, double theta, double sign,
                           const quadrature::QuadratureSpec& quad) {
    const quadrature::BatchIntegrand f = [&dist, theta, sign](std::span<const double> phi, std::span<double> y) {
        std::vector<double> arg(phi.size()), c(phi.size()), s(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) {
            arg[i] = 0.5 * (theta - phi[i]);
        }
        simd::cos_sin(arg, c, s);
        dist.density(phi, y);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const double f = sign > 0.0 ? c[i] : s[i];
            y[i] *= f * f;
        }
    };
    return quadrature::integrate_batch(f, 0.0, two_pi, quad, dist.hints()).value;
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

} // namespace

DensityMatrix2 DensityMatrix2::projector(const spin::SpinState& chi) {
    return DensityMatrix2(Matrix{{{chi.up * std::conj(chi.up), chi.up * std::conj(chi.down)},
                                  {chi.down * std::conj(chi.up), chi.down * std::conj(chi.down)}}});
}

double DensityMatrix2::purity() const {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            acc += m_[i][j] * m_[j][i];
        }
    }
    return acc.real();
}

std::array<double, 2> DensityMatrix2::eigenvalues() const {
    const double a = m_[0][0].real();
    const double c = m_[1][1].real();
    const std::complex<double> b = 0.5 * (m_[0][1] + std::conj(m_[1][0]));
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), std::abs(b));
    return {mean - radius, mean + radius};
}

double DensityMatrix2::hermiticity_defect() const {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            worst = std::max(worst, std::abs(m_[i][j] - std::conj(m_[j][i])));
        }
    }
    return worst;
}

double DensityMatrix2::expectation(const spin::SpinState& chi) const {
    const std::array<std::complex<double>, 2> v{chi.up, chi.down};
    std::complex<double> acc = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            acc += std::conj(v[i]) * m_[i][j] * v[j];
        }
    }
    return acc.real();
}

void DensityMatrix2::check_invariants() const {
    if (hermiticity_defect() > 1e-12) {
        throw InvariantViolation("density matrix is not Hermitian");
    }
    if (std::abs(trace() - 1.0) > 1e-8) {
        throw InvariantViolation("density matrix trace is " + format_double(trace().real()));
    }
    if (eigenvalues()[0] < -1e-12) {
        throw InvariantViolation("density matrix has a negative eigenvalue");
    }
}

double p_plus(const distribution::AngularDistribution& dist, double theta, const quadrature::QuadratureSpec& quad) {
    return weighted_projection(dist, theta, 1.0, quad);
}

double p_minus(const distribution::AngularDistribution& dist, double theta, const quadrature::QuadratureSpec& quad) {
    return weighted_projection(dist, theta, -1.0, quad);
}

MeasurementResult measure(const distribution::AngularDistribution& dist, double theta,
                          const quadrature::QuadratureSpec& quad) {
    if (!(theta >= 0.0 && theta < two_pi)) {
        throw DomainError("theta must lie in [0, 2 pi)");
    }
    return MeasurementResult{theta, p_plus(dist, theta, quad), p_minus(dist, theta, quad)};
}

MeasurementResult semiclassical_prediction(const PhysicsConfig& cfg, double theta) {
    const double half = 0.5 * (theta - cfg.peak_phi());
    const double c = std::cos(half);
    const double s = std::sin(half);
    return MeasurementResult{theta, c * c, s * s};
}

DensityMatrix2 density_matrix(const distribution::AngularDistribution& dist, const quadrature::QuadratureSpec& quad) {
    // Integrand k: 0 -> Pi, 1 -> Pi (2 + cos(phi)), 2 -> Pi (2 + sin(phi)). The
    // shift keeps the first moments bounded away from zero so the relative
    // tolerance scales with the mass; 2 * mass is subtracted afterwards.
    auto moment = [&dist, &quad](int k) {
        const quadrature::BatchIntegrand f = [&dist, k](std::span<const double> phi, std::span<double> y) {
            dist.density(phi, y);
            if (k == 0) {
                return;
            }
            std::vector<double> c(phi.size()), s(phi.size());
            simd::cos_sin(phi, c, s);
            const auto& factor = k == 1 ? c : s;
            for (std::size_t i = 0; i < phi.size(); ++i) {
                y[i] *= 2.0 + factor[i];
            }
        };
        return quadrature::integrate_batch(f, 0.0, two_pi, quad, dist.hints()).value;
    };
    const double mass = moment(0);
    const std::complex<double> coherence{moment(1) - 2.0 * mass, moment(2) - 2.0 * mass};  // integral of Pi e^{i phi}
    return DensityMatrix2(DensityMatrix2::Matrix{{{0.5 * mass, 0.5 * std::conj(coherence)},
                                                  {0.5 * coherence, 0.5 * mass}}});
}

std::vector<DeviationRow> deviation_report(const PhysicsConfig& cfg, distribution::ArrivalScheme scheme,
                                           const std::vector<double>& thetas, const quadrature::QuadratureSpec& quad) {
    cfg.validate();
    std::vector<DeviationRow> rows;
    rows.reserve(thetas.size());
    if (scheme == distribution::ArrivalScheme::semiclassical_delta) {
        for (double theta : thetas) {
            const auto sc = semiclassical_prediction(cfg, theta);
            rows.push_back(DeviationRow{theta, sc.p_plus, sc.p_minus, sc.p_plus, 0.0});
        }
        return rows;
    }
    const auto dist = distribution::pi_of_phi(cfg, scheme, quad);
    for (double theta : thetas) {
        const auto quantum = measure(dist, theta, quad);
        const auto sc = semiclassical_prediction(cfg, theta);
        rows.push_back(DeviationRow{theta, quantum.p_plus, quantum.p_minus, sc.p_plus, sc.p_plus - quantum.p_plus});
    }
    return rows;
}

double round_half_away(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

void write_csv(std::ostream& out, const std::vector<DeviationRow>& rows) {
    out << "theta_deg,p_plus,p_minus,p_plus_sc,delta\n";
    for (const auto& row : rows) {
        out << format_double(rad_to_deg(row.theta)) << ',' << format_double(row.p_plus) << ','
            << format_double(row.p_minus) << ',' << format_double(row.p_plus_semiclassical) << ','
            << format_double(row.delta) << '\n';
    }
}

} // namespace qclock::measurement
