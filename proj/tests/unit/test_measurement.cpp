#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qclock/errors.hpp"
#include "qclock/measurement.hpp"

using namespace qclock;
using distribution::ArrivalScheme;
using measurement::DensityMatrix2;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const quadrature::QuadratureSpec quad;

PhysicsConfig with_sigma(PhysicsConfig cfg, double sigma0) {
    cfg.sigma0 = sigma0;
    return cfg;
}

distribution::AngularDistribution total_current(const PhysicsConfig& cfg) {
    return distribution::pi_of_phi(cfg, ArrivalScheme::modulus_total_current, quad);
}

// Normalized Gaussian on [0, 2 pi] used as a stand-in for a delta at phi0.
distribution::AngularDistribution narrow_bump(double phi0, double width) {
    const std::vector<double> hints{phi0};
    return distribution::AngularDistribution::from_density(
        [phi0, width](std::span<const double> x, std::span<double> y) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double z = (x[i] - phi0) / width;
                y[i] = std::exp(-0.5 * z * z);
            }
        },
        hints, quad);
}

} // namespace

TEST_CASE("semiclassical baseline") {
    const auto cfg = preset_one();
    const double peak = cfg.peak_phi();
    CHECK(measurement::semiclassical_prediction(cfg, peak).p_plus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(measurement::semiclassical_prediction(cfg, peak + deg_to_rad(90.0)).p_plus ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(measurement::semiclassical_prediction(cfg, peak + deg_to_rad(60.0)).p_plus ==
          doctest::Approx(0.75).epsilon(1e-15));
    const auto r = measurement::semiclassical_prediction(cfg, 1.234);
    CHECK(r.p_plus + r.p_minus == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("set I narrow-packet values") {
    const auto cfg = preset_one();
    const auto dist = total_current(cfg);
    const double theta = cfg.peak_phi() + deg_to_rad(60.0);
    CHECK(std::abs(measurement::p_plus(dist, theta, quad) - 0.75) <= 1e-5);
}

TEST_CASE("set I sigma0 = 1e-8 values") {
    const auto cfg = with_sigma(preset_one(), 1e-8);
    const auto dist = total_current(cfg);
    const double phi1 = deg_to_rad(34.94767);
    CHECK(std::abs(measurement::p_plus(dist, phi1, quad) - 0.99886) <= 5e-5);
    CHECK(std::abs(measurement::p_plus(dist, phi1 + deg_to_rad(90.0), quad) - 0.50345) <= 5e-5);
}

TEST_CASE("p_plus + p_minus = 1 from independent integrals") {
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> pick(0.0, two_pi);
    for (double sigma0 : {1e-5, 1e-7, 1e-8}) {
        const auto dist = total_current(with_sigma(preset_two(), sigma0));
        for (int i = 0; i < 20; ++i) {
            const auto r = measurement::measure(dist, pick(rng), quad);
            CHECK(std::abs(r.p_plus + r.p_minus - 1.0) <= 1e-10);
            CHECK(r.p_plus >= 0.0);
            CHECK(r.p_minus >= 0.0);
        }
    }
}

TEST_CASE("density matrix invariants and the projection cross-check") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> pick(0.0, two_pi);
    for (double sigma0 : {1e-5, 1e-8}) {
        const auto dist = total_current(with_sigma(preset_one(), sigma0));
        const auto w = measurement::density_matrix(dist, quad);
        CHECK_NOTHROW(w.check_invariants());
        CHECK(std::abs(w.trace() - 1.0) <= 1e-8);
        CHECK(w.eigenvalues()[0] >= -1e-12);
        CHECK(w.hermiticity_defect() <= 1e-12);
        CHECK(w.purity() <= 1.0 + 1e-12);
        for (int i = 0; i < 50; ++i) {
            const double theta = pick(rng);
            const double via_w = w.expectation(spin::chi_of_phi(theta));
            CHECK(std::abs(via_w - measurement::p_plus(dist, theta, quad)) <= 1e-9);
        }
    }
}

TEST_CASE("a near-delta distribution gives the pure projector") {
    const double phi0 = 1.1;
    const auto w = measurement::density_matrix(narrow_bump(phi0, 1e-9), quad);
    const auto p = DensityMatrix2::projector(spin::chi_of_phi(phi0));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(w(i, j) - p(i, j)) <= 1e-9);
        }
    }
    CHECK(w.purity() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.purity() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("the uniform distribution is maximally mixed") {
    const auto uniform = distribution::AngularDistribution::from_density(
        [](std::span<const double>, std::span<double> y) {
            for (double& v : y) v = 1.0;
        },
        {}, quad);
    const auto w = measurement::density_matrix(uniform, quad);
    CHECK(w(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(w(0, 1)) <= 1e-12);
    CHECK(w.purity() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(measurement::p_plus(uniform, 2.0, quad) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("invariant violations are reported") {
    using M = DensityMatrix2::Matrix;
    CHECK_THROWS_AS(DensityMatrix2(M{{{0.5, 0.3}, {0.0, 0.5}}}).check_invariants(), InvariantViolation);
    CHECK_THROWS_AS(DensityMatrix2(M{{{0.7, 0.0}, {0.0, 0.5}}}).check_invariants(), InvariantViolation);
    CHECK_THROWS_AS(DensityMatrix2(M{{{0.5, 0.9}, {0.9, 0.5}}}).check_invariants(), InvariantViolation);
    CHECK_NOTHROW(DensityMatrix2(M{{{0.5, 0.5}, {0.5, 0.5}}}).check_invariants());
}

TEST_CASE("deviation report against the semiclassical baseline") {
    const double phi1 = deg_to_rad(34.94767);
    const double phi2 = deg_to_rad(69.89534);
    const std::vector<double> thetas1{phi1, phi1 + deg_to_rad(60.0), phi1 + deg_to_rad(90.0)};

    const auto narrow = measurement::deviation_report(preset_one(), ArrivalScheme::modulus_total_current, thetas1, quad);
    for (const auto& row : narrow) {
        CHECK(std::abs(row.delta) < 1e-5);
    }
    const auto wide = measurement::deviation_report(with_sigma(preset_one(), 1e-8),
                                                    ArrivalScheme::modulus_total_current, thetas1, quad);
    CHECK(std::abs(wide[0].delta - 0.00114) <= 5e-5);
    CHECK(wide[0].delta == doctest::Approx(wide[0].p_plus_semiclassical - wide[0].p_plus));

    const auto two = measurement::deviation_report(with_sigma(preset_two(), 1e-8),
                                                   ArrivalScheme::modulus_total_current, {phi2}, quad);
    CHECK(std::abs(two[0].delta - 0.00454) <= 5e-5);

    const auto baseline = measurement::deviation_report(preset_one(), ArrivalScheme::semiclassical_delta, thetas1, quad);
    for (const auto& row : baseline) {
        CHECK(row.delta == 0.0);
        CHECK(row.p_plus == row.p_plus_semiclassical);
    }
}

TEST_CASE("spin-term contribution to P+ (regression)") {
    // |P+(total) - P+(Schroedinger only)|. At the exit point |jz/jx| is of order
    // 1e-8 for both sets, so the modulus moves by ~1e-16 relative and the two
    // schemes agree to double precision.
    for (const auto& base : {preset_one(), preset_two()}) {
        for (double sigma0 : {1e-5, 1e-7, 1e-8}) {
            const auto cfg = with_sigma(base, sigma0);
            const std::vector<double> thetas{cfg.peak_phi(), cfg.peak_phi() + deg_to_rad(60.0),
                                             cfg.peak_phi() + deg_to_rad(90.0)};
            const auto total = measurement::deviation_report(cfg, ArrivalScheme::modulus_total_current, thetas, quad);
            const auto sch =
                measurement::deviation_report(cfg, ArrivalScheme::modulus_schrodinger_current, thetas, quad);
            for (std::size_t i = 0; i < thetas.size(); ++i) {
                CHECK(std::abs(total[i].p_plus - sch[i].p_plus) <= 1e-14);
            }
        }
    }
}

TEST_CASE("rounding half away from zero") {
    CHECK(measurement::round_half_away(2.5, 0) == 3.0);
    CHECK(measurement::round_half_away(-2.5, 0) == -3.0);
    CHECK(measurement::round_half_away(0.125, 2) == doctest::Approx(0.13).epsilon(1e-15));
    CHECK(measurement::round_half_away(0.99886564, 5) == doctest::Approx(0.99887).epsilon(1e-15));
    CHECK(measurement::round_half_away(0.00113436, 5) == doctest::Approx(0.00113).epsilon(1e-15));
}

TEST_CASE("theta domain and CSV layout") {
    const auto dist = total_current(preset_one());
    CHECK_THROWS_AS(measurement::measure(dist, -0.1, quad), DomainError);
    CHECK_THROWS_AS(measurement::measure(dist, two_pi, quad), DomainError);

    const auto rows = measurement::deviation_report(preset_one(), ArrivalScheme::modulus_total_current,
                                                    {deg_to_rad(34.94767)}, quad);
    std::ostringstream out;
    measurement::write_csv(out, rows);
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "theta_deg,p_plus,p_minus,p_plus_sc,delta");
    CHECK(std::stod(row.substr(0, row.find(','))) == doctest::Approx(34.94767).epsilon(1e-14));
}
