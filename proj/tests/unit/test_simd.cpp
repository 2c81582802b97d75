#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "qclock/errors.hpp"
#include "qclock/simd/kernels.hpp"

using namespace qclock;

namespace {

std::vector<double> sample_times(const PhysicsConfig& cfg, std::size_t n) {
    std::mt19937_64 rng(53);
    const double transit = cfg.transit_time();
    std::uniform_real_distribution<double> near(transit * (1.0 - 1e-3), transit * (1.0 + 1e-3));
    std::uniform_real_distribution<double> wide(0.0, 4.0 * transit);
    std::vector<double> t;
    for (std::size_t i = 0; i < n; ++i) {
        t.push_back(i % 3 == 0 ? wide(rng) : near(rng));
    }
    t.push_back(0.0);
    t.push_back(transit);
    return t;  // length not a multiple of four, so the tail loop runs
}

struct RestoreIsa {
    simd::Isa saved = simd::active_isa();
    ~RestoreIsa() { simd::force_isa(saved); }
};

} // namespace

TEST_CASE("scalar batch kernel is the reference formula") {
    PhysicsConfig cfg = preset_one();
    cfg.sigma0 = 1e-7;
    const auto p = simd::ExitCurrentParams::from(cfg);
    const auto t = sample_times(cfg, 101);
    std::vector<double> jx(t.size()), jz(t.size()), m(t.size());
    simd::scalar::exit_current(p, t, jx, jz, m);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto ref = simd::exit_current_point(p, t[i]);
        CHECK(jx[i] == ref.jx);
        CHECK(jz[i] == ref.jz);
        CHECK(m[i] == ref.modulus);
    }
}

#if defined(QCLOCK_HAVE_AVX2)

TEST_CASE("AVX2 exit current matches the scalar reference") {
    if (simd::detected_isa() != simd::Isa::avx2) {
        MESSAGE("CPU lacks AVX2+FMA; skipping");
        return;
    }
    for (double sigma0 : {1e-4, 1e-5, 1e-7, 1e-8}) {
        for (double d : {1.0, 2.0}) {
            PhysicsConfig cfg = preset_one();
            cfg.sigma0 = sigma0;
            cfg.d = d;
            const auto p = simd::ExitCurrentParams::from(cfg);
            const auto t = sample_times(cfg, 1001);
            std::vector<double> jx_s(t.size()), jz_s(t.size()), m_s(t.size());
            std::vector<double> jx_v(t.size()), jz_v(t.size()), m_v(t.size());
            simd::scalar::exit_current(p, t, jx_s, jz_s, m_s);
            simd::avx2::exit_current(p, t, jx_v, jz_v, m_v);
            for (std::size_t i = 0; i < t.size(); ++i) {
                const double scale = m_s[i];
                if (scale == 0.0) {
                    CHECK(m_v[i] == 0.0);
                    continue;
                }
                CHECK(std::abs(jx_v[i] - jx_s[i]) <= 1e-14 * scale);
                CHECK(std::abs(jz_v[i] - jz_s[i]) <= 1e-14 * scale);
                CHECK(std::abs(m_v[i] - m_s[i]) <= 1e-14 * scale);
            }
        }
    }
}

TEST_CASE("AVX2 cos/sin matches libm") {
    if (simd::detected_isa() != simd::Isa::avx2) {
        MESSAGE("CPU lacks AVX2+FMA; skipping");
        return;
    }
    std::mt19937_64 rng(59);
    std::vector<double> x;
    for (double range : {1.0, 10.0, 1e3, 1e5}) {
        std::uniform_real_distribution<double> pick(-range, range);
        for (int i = 0; i < 2001; ++i) {
            x.push_back(pick(rng));
        }
    }
    for (int k = -64; k <= 64; ++k) {
        x.push_back(k * std::numbers::pi / 4.0);  // quadrant boundaries
    }
    x.push_back(0.0);
    x.push_back(-0.0);
    std::vector<double> c(x.size()), s(x.size()), cr(x.size()), sr(x.size());
    simd::avx2::cos_sin(x, c, s);
    simd::scalar::cos_sin(x, cr, sr);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(c[i] - cr[i]) <= 4e-16);
        CHECK(std::abs(s[i] - sr[i]) <= 4e-16);
    }
}

TEST_CASE("dispatch follows force_isa") {
    RestoreIsa restore;
    PhysicsConfig cfg = preset_one();
    const auto p = simd::ExitCurrentParams::from(cfg);
    const auto t = sample_times(cfg, 37);
    std::vector<double> jx(t.size()), jz(t.size()), m(t.size());
    std::vector<double> jx_r(t.size()), jz_r(t.size()), m_r(t.size());

    simd::force_isa(simd::Isa::scalar);
    CHECK(simd::active_isa() == simd::Isa::scalar);
    simd::exit_current(p, t, jx, jz, m);
    simd::scalar::exit_current(p, t, jx_r, jz_r, m_r);
    CHECK(m == m_r);

    if (simd::detected_isa() == simd::Isa::avx2) {
        simd::force_isa(simd::Isa::avx2);
        CHECK(simd::active_isa() == simd::Isa::avx2);
        simd::exit_current(p, t, jx, jz, m);
        simd::avx2::exit_current(p, t, jx_r, jz_r, m_r);
        CHECK(m == m_r);
    }
}

#endif

TEST_CASE("isa names and detection") {
    CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
    CHECK(simd::isa_name(simd::Isa::avx2) == "avx2");
    CHECK(simd::active_isa() == simd::detected_isa());
#if !defined(QCLOCK_HAVE_AVX2)
    CHECK_THROWS_AS(simd::force_isa(simd::Isa::avx2), DomainError);
#endif
}
