#pragma once

// Four-lane double exp / sin / cos for AVX2+FMA. Only included from
// translation units compiled with -mavx2 -mfma.

#include <immintrin.h>

namespace qclock::simd::avx2::detail {

inline __m256d poly(__m256d x, const double* coeffs, int count) {
    // coeffs[0] is the highest order term.
    __m256d acc = _mm256_set1_pd(coeffs[0]);
    for (int i = 1; i < count; ++i) {
        acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(coeffs[i]));
    }
    return acc;
}

inline __m256i to_int64(__m256d integral) {
    return _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(integral));
}

/// exp(x) for x in [-708, 709]; callers mask anything outside.
inline __m256d exp(__m256d x) {
    static constexpr double taylor[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
        1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
        1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
        1.0,                1.0,
    };
    const __m256d log2e = _mm256_set1_pd(1.44269504088896338700e+00);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);
    const __m256d p = poly(r, taylor, 14);

    const __m256i biased = _mm256_add_epi64(to_int64(n), _mm256_set1_epi64x(1023));
    const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));
    return _mm256_mul_pd(p, scale);
}

/// Simultaneous cos and sin; accurate for |x| well below 2^20.
inline void cos_sin(__m256d x, __m256d& c, __m256d& s) {
    static constexpr double sin_taylor[] = {
        1.0 / 355687428096000.0,  -1.0 / 1307674368000.0, 1.0 / 6227020800.0, -1.0 / 39916800.0,
        1.0 / 362880.0,           -1.0 / 5040.0,          1.0 / 120.0,        -1.0 / 6.0,
        1.0,
    };
    static constexpr double cos_taylor[] = {
        -1.0 / 6402373705728000.0, 1.0 / 20922789888000.0, -1.0 / 87178291200.0, 1.0 / 479001600.0,
        -1.0 / 3628800.0,          1.0 / 40320.0,          -1.0 / 720.0,         1.0 / 24.0,
        -0.5,                      1.0,
    };
    const __m256d two_over_pi = _mm256_set1_pd(6.36619772367581382433e-01);
    const __m256d pio2_1 = _mm256_set1_pd(1.57079632673412561417e+00);
    const __m256d pio2_2 = _mm256_set1_pd(6.07710050630396597660e-11);
    const __m256d pio2_3 = _mm256_set1_pd(2.02226624871116645580e-21);

    const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, two_over_pi), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(q, pio2_1, x);
    r = _mm256_fnmadd_pd(q, pio2_2, r);
    r = _mm256_fnmadd_pd(q, pio2_3, r);

    const __m256d r2 = _mm256_mul_pd(r, r);
    const __m256d sin_r = _mm256_mul_pd(poly(r2, sin_taylor, 9), r);
    const __m256d cos_r = poly(r2, cos_taylor, 10);

    const __m256i quadrant = to_int64(q);
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i two = _mm256_set1_epi64x(2);
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(quadrant, one), one));
    const __m256d sin_sign = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(quadrant, two), 62));
    const __m256d cos_sign =
        _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(quadrant, one), two), 62));

    s = _mm256_xor_pd(_mm256_blendv_pd(sin_r, cos_r, swap), sin_sign);
    c = _mm256_xor_pd(_mm256_blendv_pd(cos_r, sin_r, swap), cos_sign);
}

} // namespace qclock::simd::avx2::detail
