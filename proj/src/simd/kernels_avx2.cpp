#include <immintrin.h>

#include <numbers>

#include "avx2_math.hpp"
#include "qclock/simd/kernels.hpp"

namespace qclock::simd::avx2 {

namespace {

constexpr std::size_t lanes = 4;

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

} // namespace

void exit_current(const ExitCurrentParams& p, std::span<const double> t, std::span<double> jx,
                  std::span<double> jz, std::span<double> modulus) {
    // Operation order mirrors exit_current_point step for step: d - u t and the
    // exponent are badly conditioned, so a fused or reassociated variant would
    // differ from the reference by far more than an ulp in the far tail.
    const double s02 = p.sigma0 * p.sigma0;
    const __m256d v_s02 = _mm256_set1_pd(s02);
    const __m256d v_two_s02 = _mm256_set1_pd(2.0 * s02);
    const __m256d v_d = _mm256_set1_pd(p.d);
    const __m256d v_u = _mm256_set1_pd(p.u);
    const __m256d v_a = _mm256_set1_pd(p.hbar_over_m);
    const __m256d v_a2 = _mm256_set1_pd(p.hbar_over_m * p.hbar_over_m);
    const __m256d v_four_s04 = _mm256_set1_pd(4.0 * s02 * s02);
    const __m256d v_two_omega = _mm256_set1_pd(p.two_omega);
    const __m256d v_floor = _mm256_set1_pd(exponent_floor);
    const __m256d v_two_pi = _mm256_set1_pd(2.0 * std::numbers::pi);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d zero = _mm256_setzero_pd();

    const std::size_t n = t.size();
    std::size_t i = 0;
    for (; i + lanes <= n; i += lanes) {
        const __m256d tv = _mm256_loadu_pd(t.data() + i);
        const __m256d spread = _mm256_div_pd(_mm256_mul_pd(v_a, tv), v_two_s02);
        const __m256d sigma_t2 = _mm256_mul_pd(v_s02, _mm256_add_pd(one, _mm256_mul_pd(spread, spread)));
        const __m256d lag = _mm256_sub_pd(v_d, _mm256_mul_pd(v_u, tv));
        const __m256d two_sigma2 = _mm256_mul_pd(two, sigma_t2);
        const __m256d exponent = _mm256_div_pd(_mm256_sub_pd(zero, _mm256_mul_pd(lag, lag)), two_sigma2);
        const __m256d live = _mm256_cmp_pd(exponent, v_floor, _CMP_GE_OQ);

        const __m256d e = detail::exp(_mm256_max_pd(exponent, v_floor));
        const __m256d density = _mm256_div_pd(e, _mm256_sqrt_pd(_mm256_mul_pd(v_two_pi, sigma_t2)));

        const __m256d a2t = _mm256_mul_pd(v_a2, tv);
        const __m256d denom = _mm256_add_pd(v_four_s04, _mm256_mul_pd(a2t, tv));
        const __m256d velocity = _mm256_add_pd(v_u, _mm256_div_pd(_mm256_mul_pd(lag, a2t), denom));
        const __m256d jxv = _mm256_mul_pd(density, velocity);

        __m256d c, s;
        detail::cos_sin(_mm256_mul_pd(v_two_omega, tv), c, s);
        const __m256d spin_factor = _mm256_div_pd(_mm256_mul_pd(v_a, _mm256_sub_pd(zero, lag)), two_sigma2);
        const __m256d jzv = _mm256_mul_pd(_mm256_mul_pd(density, spin_factor), s);

        const __m256d ax = abs_pd(jxv);
        const __m256d az = abs_pd(jzv);
        const __m256d big = _mm256_max_pd(ax, az);
        const __m256d small = _mm256_min_pd(ax, az);
        const __m256d nonzero = _mm256_cmp_pd(big, zero, _CMP_GT_OQ);
        const __m256d ratio = _mm256_div_pd(small, _mm256_blendv_pd(one, big, nonzero));
        const __m256d mod = _mm256_mul_pd(big, _mm256_sqrt_pd(_mm256_add_pd(one, _mm256_mul_pd(ratio, ratio))));

        _mm256_storeu_pd(jx.data() + i, _mm256_and_pd(jxv, live));
        _mm256_storeu_pd(jz.data() + i, _mm256_and_pd(jzv, live));
        _mm256_storeu_pd(modulus.data() + i, _mm256_and_pd(_mm256_and_pd(mod, nonzero), live));
    }
    for (; i < n; ++i) {
        const auto point = exit_current_point(p, t[i]);
        jx[i] = point.jx;
        jz[i] = point.jz;
        modulus[i] = point.modulus;
    }
}

void cos_sin(std::span<const double> x, std::span<double> c, std::span<double> s) {
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + lanes <= n; i += lanes) {
        __m256d cv, sv;
        detail::cos_sin(_mm256_loadu_pd(x.data() + i), cv, sv);
        _mm256_storeu_pd(c.data() + i, cv);
        _mm256_storeu_pd(s.data() + i, sv);
    }
    for (; i < n; ++i) {
        c[i] = std::cos(x[i]);
        s[i] = std::sin(x[i]);
    }
}

} // namespace qclock::simd::avx2
