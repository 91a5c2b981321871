#pragma once

#include <cstddef>

// Hot inner loops of the sequence algebra. A scalar reference implementation
// always exists; SIMD variants are registered at startup when the CPU
// supports them and must agree with the scalar path to rounding error
// (equivalence-tested in tests/test_kernels.cpp). Everything downstream
// (convolution, deconvolution, weighted error sums) funnels through these.
namespace fopid::kernels {

enum class Backend { Scalar, Avx2, Neon };

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i w[i] * |r0 - y[i]|
double weighted_abs_error(const double* w, const double* y, double r0, std::size_t n);

Backend active_backend();
bool supported(Backend backend);
const char* name(Backend backend);

// Select a backend explicitly (tests, benchmarking). Throws
// std::invalid_argument if this build/CPU does not support it.
void use_backend(Backend backend);

namespace detail {
double dot_scalar(const double* a, const double* b, std::size_t n);
double weighted_abs_error_scalar(const double* w, const double* y, double r0, std::size_t n);
#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(const double* a, const double* b, std::size_t n);
double weighted_abs_error_avx2(const double* w, const double* y, double r0, std::size_t n);
#endif
#if defined(__aarch64__)
double dot_neon(const double* a, const double* b, std::size_t n);
double weighted_abs_error_neon(const double* w, const double* y, double r0, std::size_t n);
#endif
}  // namespace detail

}  // namespace fopid::kernels
