// NEON variants of the hot kernels (aarch64 only).

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "fopid/kernels.hpp"

namespace fopid::kernels::detail {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    if (i + 2 <= n) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        i += 2;
    }
    double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_abs_error_neon(const double* w, const double* y, double r0, std::size_t n) {
    const float64x2_t ref = vdupq_n_f64(r0);
    float64x2_t acc0 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t err = vabsq_f64(vsubq_f64(ref, vld1q_f64(y + i)));
        acc0 = vfmaq_f64(acc0, vld1q_f64(w + i), err);
    }
    double acc = vaddvq_f64(acc0);
    for (; i < n; ++i) acc += w[i] * std::fabs(r0 - y[i]);
    return acc;
}

}  // namespace fopid::kernels::detail
