#include "fopid/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace fopid::kernels {

namespace detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double weighted_abs_error_scalar(const double* w, const double* y, double r0, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::fabs(r0 - y[i]);
    return acc;
}

}  // namespace detail

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t);
using WabsFn = double (*)(const double*, const double*, double, std::size_t);

struct Dispatch {
    Backend backend = Backend::Scalar;
    DotFn dot = detail::dot_scalar;
    WabsFn wabs = detail::weighted_abs_error_scalar;
};

bool cpu_supports(Backend backend) {
    switch (backend) {
        case Backend::Scalar:
            return true;
        case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Backend::Neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Dispatch make_dispatch(Backend backend) {
    Dispatch d;
    d.backend = backend;
    switch (backend) {
        case Backend::Scalar:
            break;
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::Avx2:
            d.dot = detail::dot_avx2;
            d.wabs = detail::weighted_abs_error_avx2;
            break;
#endif
#if defined(__aarch64__)
        case Backend::Neon:
            d.dot = detail::dot_neon;
            d.wabs = detail::weighted_abs_error_neon;
            break;
#endif
        default:
            throw std::invalid_argument("kernel backend not compiled into this build");
    }
    return d;
}

Backend best_backend() {
    if (cpu_supports(Backend::Avx2)) return Backend::Avx2;
    if (cpu_supports(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

Dispatch& dispatch() {
    static Dispatch d = make_dispatch(best_backend());
    return d;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    return dispatch().dot(a, b, n);
}

double weighted_abs_error(const double* w, const double* y, double r0, std::size_t n) {
    return dispatch().wabs(w, y, r0, n);
}

Backend active_backend() {
    return dispatch().backend;
}

bool supported(Backend backend) {
    return cpu_supports(backend);
}

const char* name(Backend backend) {
    switch (backend) {
        case Backend::Scalar:
            return "scalar";
        case Backend::Avx2:
            return "avx2";
        case Backend::Neon:
            return "neon";
    }
    return "unknown";
}

void use_backend(Backend backend) {
    if (!cpu_supports(backend)) throw std::invalid_argument("kernel backend unsupported on this CPU");
    dispatch() = make_dispatch(backend);
}

}  // namespace fopid::kernels
