// AVX2+FMA variants of the hot kernels. Compiled with -mavx2 -mfma and only
// ever called after a runtime cpuid check (see kernels.cpp).

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "fopid/kernels.hpp"

namespace fopid::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_abs_error_avx2(const double* w, const double* y, double r0, std::size_t n) {
    const __m256d ref = _mm256_set1_pd(r0);
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc0 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d err = _mm256_sub_pd(ref, _mm256_loadu_pd(y + i));
        err = _mm256_andnot_pd(signmask, err);  // |r0 - y|
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), err, acc0);
    }
    double acc = hsum(acc0);
    for (; i < n; ++i) acc += w[i] * std::fabs(r0 - y[i]);
    return acc;
}

}  // namespace fopid::kernels::detail
