#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fopid/errors.hpp"

// Finite-horizon discrete LTI algebra. All loop compositions (series,
// feedback, inversion) are carried out on truncated impulse-response
// sequences rather than expanded polynomial quotients; this keeps every
// identity exact at the truncation horizon and avoids the conditioning of
// high-degree polynomial products. Everything here is a pure function over
// immutable values.
namespace fopid {

// Real time series {v_0 .. v_N} at a fixed sampling time.
struct Sequence {
    std::vector<double> values;
    double sample_time = 1.0;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
    double& operator[](std::size_t k) { return values[k]; }
    const double* data() const { return values.data(); }
};

// Validating constructors. make_sequence requires length >= 1, finite
// values and sample_time > 0.
Sequence make_sequence(std::vector<double> values, double sample_time);
Sequence constant_sequence(std::size_t length, double value, double sample_time);
Sequence unit_impulse(std::size_t length, double sample_time);

double max_abs(const Sequence& s);
double sum_abs(const Sequence& s);
bool all_finite(const Sequence& s);

// Continuous-time rational transfer function; coefficients in descending
// powers of s. Construction trims leading numerator zeros and requires a
// nonzero leading denominator coefficient.
struct ContinuousTf {
    std::vector<double> num;
    std::vector<double> den;
};

ContinuousTf make_continuous_tf(std::vector<double> num, std::vector<double> den);
bool is_proper(const ContinuousTf& g);
std::complex<double> evaluate(const ContinuousTf& g, std::complex<double> s);

// Discrete-time transfer function as difference-equation coefficients
//   y_k = sum_i b[i] u_{k-i} - sum_{i>=1} a[i] y_{k-i}
// normalized so that a[0] == 1.
struct DiscreteTf {
    std::vector<double> b;
    std::vector<double> a;
    double sample_time = 1.0;
};

DiscreteTf make_discrete_tf(std::vector<double> b, std::vector<double> a, double sample_time);
std::complex<double> evaluate(const DiscreteTf& g, std::complex<double> z);

// Bilinear (Tustin) image of g at the given sampling time. Preserves the DC
// gain whenever g(0) is finite. Throws DiscretizationError when the mapping
// degenerates (2/Ts is a root of the denominator). Accepts improper g; the
// discrete image is realizable either way.
DiscreteTf tustin(const ContinuousTf& g, double sample_time);

// Run the difference equation of g over an input sequence.
Sequence filter(const DiscreteTf& g, const Sequence& u);

// First n+1 impulse-response samples {g_0 .. g_n} by running the recursion
// on a unit impulse.
Sequence impulse_response(const DiscreteTf& g, std::size_t n);

// Truncated convolution: result_k = sum_{i=0..k} a_i b_{k-i}. The shorter
// input is zero-padded; the result keeps the common length.
Sequence conv_trunc(const Sequence& a, const Sequence& b);

// Solve conv_trunc(a, x) = b for x by forward substitution on the implied
// lower-triangular Toeplitz system:
//   x_0 = b_0 / a_0,   x_k = (b_k - sum_{i=1..k} a_i x_{k-i}) / a_0.
// The exact inverse of a may be unstable, in which case x grows over the
// horizon; values are checked finite and NonFiniteError is thrown on
// overflow. SingularityError if |a_0| is below leading_floor.
Sequence deconvolve(const Sequence& a, const Sequence& b, double leading_floor = 0.0);

// Truncated impulse response of the unity-feedback closed loop
// pc/(1 + pc): with g = conv_trunc(p, c), solves (delta + g) * t = g.
Sequence closed_loop_impulse(const Sequence& p_imp, const Sequence& c_imp);

// Output under a step reference of height r0: y_k = r0 * sum_{i<=k} t_i.
Sequence step_response_from_t(const Sequence& t, double r0);

namespace poly {
// Dense polynomial helpers on plain coefficient vectors. mul and scale are
// orientation agnostic; add aligns coefficients at index 0, so operands must
// share the same storage orientation and degree alignment.
std::vector<double> mul(const std::vector<double>& p, const std::vector<double>& q);
std::vector<double> add(const std::vector<double>& p, const std::vector<double>& q);
std::vector<double> scale(std::vector<double> p, double c);
}  // namespace poly

}  // namespace fopid
