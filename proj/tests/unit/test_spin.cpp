#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qclock/errors.hpp"
#include "qclock/physics_config.hpp"
#include "qclock/spin.hpp"

using namespace qclock;
using cd = std::complex<double>;
using Mat = std::array<std::array<cd, 2>, 2>;

namespace {

constexpr double hbar = constants::hbar;
constexpr double pi = std::numbers::pi;

Mat multiply(const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

// exp(-i omega t sigma_z) by scaling and squaring of a truncated Taylor series;
// shares nothing with the closed form under test.
Mat propagator(double omega, double t) {
    const Mat generator{{{cd{0.0, -omega * t}, 0.0}, {0.0, cd{0.0, omega * t}}}};
    int squarings = 0;
    double norm = std::abs(omega * t);
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    Mat a = generator;
    for (auto& row : a)
        for (auto& v : row) v *= scale;

    Mat result{{{1.0, 0.0}, {0.0, 1.0}}};
    Mat term = result;
    for (int n = 1; n <= 30; ++n) {
        term = multiply(term, a);
        for (auto& row : term)
            for (auto& v : row) v /= static_cast<double>(n);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) result[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s) {
        result = multiply(result, result);
    }
    return result;
}

} // namespace

TEST_CASE("initial state is x-polarized") {
    const auto chi = spin::initial_state();
    CHECK(chi.up.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(chi.down.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(chi.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
    const auto s = spin::bloch(chi, hbar);
    CHECK(s.sx == doctest::Approx(hbar / 2.0).epsilon(1e-15));
    CHECK(std::abs(s.sy) <= 1e-15 * hbar);
    CHECK(std::abs(s.sz) <= 1e-15 * hbar);
}

TEST_CASE("evolve at special times") {
    const double omega = 9.1e4;
    const auto zero = spin::evolve(omega, 0.0);
    CHECK(zero.up == spin::initial_state().up);
    CHECK(zero.down == spin::initial_state().down);

    const auto flipped = spin::bloch(spin::evolve(omega, pi / (2.0 * omega)), hbar);
    CHECK(flipped.sx == doctest::Approx(-hbar / 2.0).epsilon(1e-12));
    CHECK(std::abs(flipped.sy) <= 1e-12 * hbar);

    const auto quarter = spin::bloch(spin::evolve(omega, pi / (4.0 * omega)), hbar);
    CHECK(std::abs(quarter.sx) <= 1e-12 * hbar);
    CHECK(quarter.sy == doctest::Approx(hbar / 2.0).epsilon(1e-12));
    CHECK(std::abs(quarter.sz) <= 1e-15 * hbar);
}

TEST_CASE("evolve agrees with the matrix-exponential propagator") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> pick_t(0.0, 1e-4);
    const double omega = 91492.786110067;
    const auto chi0 = spin::initial_state();
    for (int i = 0; i < 100; ++i) {
        const double t = pick_t(rng);
        const Mat u = propagator(omega, t);
        const cd up = u[0][0] * chi0.up + u[0][1] * chi0.down;
        const cd down = u[1][0] * chi0.up + u[1][1] * chi0.down;
        const auto chi = spin::evolve(omega, t);
        CHECK(std::abs(chi.up - up) < 1e-12);
        CHECK(std::abs(chi.down - down) < 1e-12);

        const auto s = spin::bloch(chi, hbar);
        CHECK(s.sx == doctest::Approx(0.5 * hbar * std::cos(2.0 * omega * t)).epsilon(1e-9).scale(hbar));
        CHECK(s.sy == doctest::Approx(0.5 * hbar * std::sin(2.0 * omega * t)).epsilon(1e-9).scale(hbar));
    }
}

TEST_CASE("unitarity and the Larmor azimuth") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> pick_t(0.0, 1e-3);
    const double omega = 91492.786110067;
    for (int i = 0; i < 200; ++i) {
        const double t = pick_t(rng);
        const auto chi = spin::evolve(omega, t);
        CHECK(std::abs(chi.norm_squared() - 1.0) < 1e-15);
        const auto s = spin::bloch(chi, hbar);
        const double azimuth = std::atan2(s.sy, s.sx);
        double expected = std::remainder(2.0 * omega * t, 2.0 * pi);
        const double diff = std::remainder(azimuth - expected, 2.0 * pi);
        CHECK(std::abs(diff) < 1e-10);
        CHECK(s.magnitude() == doctest::Approx(hbar / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("evolve at phi / 2 omega and chi_of_phi share a Bloch vector") {
    const double omega = 91492.786110067;
    for (double phi : {0.0, 0.3, 1.0, pi, 4.5, 2.0 * pi}) {
        const auto a = spin::bloch(spin::evolve(omega, phi / (2.0 * omega)), hbar);
        const auto b = spin::bloch(spin::chi_of_phi(phi), hbar);
        CHECK(std::abs(a.sx - b.sx) < 1e-12 * hbar);
        CHECK(std::abs(a.sy - b.sy) < 1e-12 * hbar);
        CHECK(std::abs(a.sz - b.sz) < 1e-12 * hbar);
    }
}

TEST_CASE("bloch of basis states") {
    const auto up = spin::bloch(spin::SpinState{1.0, 0.0}, hbar);
    CHECK(up.sx == 0.0);
    CHECK(up.sy == 0.0);
    CHECK(up.sz == doctest::Approx(hbar / 2.0));
    const auto back = spin::bloch(spin::chi_of_phi(pi), hbar);
    CHECK(back.sx == doctest::Approx(-hbar / 2.0).epsilon(1e-15));
}

TEST_CASE("overlap of xy-plane states is cos of the half angle") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> pick(0.0, 2.0 * pi);
    for (int i = 0; i < 100; ++i) {
        const double theta = pick(rng);
        const double phi = pick(rng);
        const double c = std::cos(0.5 * (theta - phi));
        CHECK(std::norm(spin::overlap(spin::chi_of_phi(theta), spin::chi_of_phi(phi))) ==
              doctest::Approx(c * c).epsilon(1e-14).scale(1.0));
    }
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(spin::evolve(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(spin::bloch(spin::SpinState{1.0, 1.0}, hbar), InvariantViolation);
}
