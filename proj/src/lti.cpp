#include "fopid/lti.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fopid/kernels.hpp"

namespace fopid {

namespace {

void require_same_grid(const Sequence& a, const Sequence& b, const char* what) {
    if (a.sample_time != b.sample_time) {
        std::ostringstream msg;
        msg << what << ": sample_time mismatch (" << a.sample_time << " vs " << b.sample_time << ")";
        throw Error(msg.str());
    }
}

Sequence padded_to(const Sequence& s, std::size_t n) {
    Sequence out = s;
    out.values.resize(n, 0.0);
    return out;
}

}  // namespace

Sequence make_sequence(std::vector<double> values, double sample_time) {
    if (values.empty()) throw Error("sequence must have length >= 1");
    if (!(sample_time > 0.0)) throw Error("sequence sample_time must be > 0");
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteError("sequence contains a non-finite sample");
    }
    return Sequence{std::move(values), sample_time};
}

Sequence constant_sequence(std::size_t length, double value, double sample_time) {
    return make_sequence(std::vector<double>(length, value), sample_time);
}

Sequence unit_impulse(std::size_t length, double sample_time) {
    std::vector<double> v(length, 0.0);
    v.at(0) = 1.0;
    return make_sequence(std::move(v), sample_time);
}

double max_abs(const Sequence& s) {
    double m = 0.0;
    for (double v : s.values) m = std::max(m, std::fabs(v));
    return m;
}

double sum_abs(const Sequence& s) {
    double acc = 0.0;
    for (double v : s.values) acc += std::fabs(v);
    return acc;
}

bool all_finite(const Sequence& s) {
    return std::all_of(s.values.begin(), s.values.end(), [](double v) { return std::isfinite(v); });
}

ContinuousTf make_continuous_tf(std::vector<double> num, std::vector<double> den) {
    if (den.empty()) throw Error("transfer function denominator is empty");
    if (den[0] == 0.0) throw Error("leading denominator coefficient must be nonzero");
    // Trim leading numerator zeros so degrees reflect the actual polynomial.
    std::size_t lead = 0;
    while (lead + 1 < num.size() && num[lead] == 0.0) ++lead;
    num.erase(num.begin(), num.begin() + static_cast<std::ptrdiff_t>(lead));
    if (num.empty()) num = {0.0};
    return ContinuousTf{std::move(num), std::move(den)};
}

bool is_proper(const ContinuousTf& g) {
    return g.num.size() <= g.den.size();
}

std::complex<double> evaluate(const ContinuousTf& g, std::complex<double> s) {
    auto horner = [&](const std::vector<double>& p) {
        std::complex<double> acc = 0.0;
        for (double c : p) acc = acc * s + c;
        return acc;
    };
    return horner(g.num) / horner(g.den);
}

DiscreteTf make_discrete_tf(std::vector<double> b, std::vector<double> a, double sample_time) {
    if (a.empty() || b.empty()) throw Error("discrete transfer function coefficients are empty");
    if (!(sample_time > 0.0)) throw Error("discrete transfer function sample_time must be > 0");
    if (a[0] == 0.0) throw Error("discrete denominator a[0] must be nonzero");
    const double a0 = a[0];
    for (double& c : b) c /= a0;
    for (double& c : a) c /= a0;
    a[0] = 1.0;
    for (double c : b)
        if (!std::isfinite(c)) throw NonFiniteError("discrete numerator coefficient is non-finite");
    for (double c : a)
        if (!std::isfinite(c)) throw NonFiniteError("discrete denominator coefficient is non-finite");
    return DiscreteTf{std::move(b), std::move(a), sample_time};
}

std::complex<double> evaluate(const DiscreteTf& g, std::complex<double> z) {
    const std::complex<double> w = 1.0 / z;  // coefficients are in powers of z^-1
    auto horner = [&](const std::vector<double>& p) {
        std::complex<double> acc = 0.0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * w + *it;
        return acc;
    };
    return horner(g.b) / horner(g.a);
}

DiscreteTf tustin(const ContinuousTf& g, double sample_time) {
    if (!(sample_time > 0.0)) throw Error("tustin: sample_time must be > 0");
    const double c = 2.0 / sample_time;

    // Substitute s = c (1 - w) / (1 + w) with w = z^-1 and clear (1+w)^d.
    // A term q * s^p becomes q * c^p * (1-w)^p * (1+w)^(d-p); the results are
    // polynomials in w whose coefficients are exactly the difference-equation
    // coefficients.
    const std::size_t dn = g.num.size() - 1;
    const std::size_t dd = g.den.size() - 1;
    const std::size_t d = std::max(dn, dd);

    std::vector<std::vector<double>> minus_pow(d + 1), plus_pow(d + 1);
    minus_pow[0] = {1.0};
    plus_pow[0] = {1.0};
    for (std::size_t k = 1; k <= d; ++k) {
        minus_pow[k] = poly::mul(minus_pow[k - 1], {1.0, -1.0});
        plus_pow[k] = poly::mul(plus_pow[k - 1], {1.0, 1.0});
    }

    auto map_poly = [&](const std::vector<double>& p) {
        std::vector<double> acc(d + 1, 0.0);
        const std::size_t deg = p.size() - 1;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::size_t power = deg - i;  // descending storage
            auto term = poly::mul(minus_pow[power], plus_pow[d - power]);
            acc = poly::add(acc, poly::scale(std::move(term), p[i] * std::pow(c, static_cast<double>(power))));
        }
        return acc;
    };

    std::vector<double> b = map_poly(g.num);
    std::vector<double> a = map_poly(g.den);

    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::fabs(v));
    if (amax == 0.0 || std::fabs(a[0]) <= 1e-12 * amax) {
        throw DiscretizationError("tustin: degenerate mapping, 2/sample_time is a denominator root");
    }
    return make_discrete_tf(std::move(b), std::move(a), sample_time);
}

Sequence filter(const DiscreteTf& g, const Sequence& u) {
    const std::size_t n = u.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        const std::size_t bmax = std::min(k, g.b.size() - 1);
        for (std::size_t i = 0; i <= bmax; ++i) acc += g.b[i] * u[k - i];
        const std::size_t amax = std::min(k, g.a.size() - 1);
        for (std::size_t i = 1; i <= amax; ++i) acc -= g.a[i] * y[k - i];
        y[k] = acc;
    }
    return Sequence{std::move(y), u.sample_time};
}

Sequence impulse_response(const DiscreteTf& g, std::size_t n) {
    Sequence h = filter(g, unit_impulse(n + 1, g.sample_time));
    return h;
}

Sequence conv_trunc(const Sequence& a, const Sequence& b) {
    require_same_grid(a, b, "conv_trunc");
    const std::size_t n = std::max(a.size(), b.size());
    const Sequence ap = padded_to(a, n);
    const Sequence bp = padded_to(b, n);

    // Reverse one operand so each output sample is a contiguous dot product.
    std::vector<double> brev(n);
    for (std::size_t i = 0; i < n; ++i) brev[i] = bp.values[n - 1 - i];

    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = kernels::dot(ap.data(), brev.data() + (n - 1 - k), k + 1);
    }
    return Sequence{std::move(out), a.sample_time};
}

Sequence deconvolve(const Sequence& a, const Sequence& b, double leading_floor) {
    require_same_grid(a, b, "deconvolve");
    if (a.size() != b.size()) throw Error("deconvolve: sequences must have equal length");
    const std::size_t n = a.size();
    const double a0 = a.values[0];
    if (a0 == 0.0 || std::fabs(a0) < leading_floor) {
        std::ostringstream msg;
        msg << "deconvolve: leading coefficient " << a0 << " below singularity guard " << leading_floor;
        throw SingularityError(msg.str());
    }

    std::vector<double> arev(n);
    for (std::size_t i = 0; i < n; ++i) arev[i] = a.values[n - 1 - i];

    std::vector<double> x(n);
    x[0] = b.values[0] / a0;
    for (std::size_t k = 1; k < n; ++k) {
        // sum_{i=1..k} a_i x_{k-i} as a contiguous dot against reversed a
        const double s = kernels::dot(x.data(), arev.data() + (n - 1 - k), k);
        x[k] = (b.values[k] - s) / a0;
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw NonFiniteError("deconvolve: result overflowed (unstable inverse)");
    }
    return Sequence{std::move(x), a.sample_time};
}

Sequence closed_loop_impulse(const Sequence& p_imp, const Sequence& c_imp) {
    Sequence g = conv_trunc(p_imp, c_imp);
    if (1.0 + g.values[0] == 0.0) {
        throw AlgebraicLoopError("closed loop is ill-posed: 1 + p0*c0 == 0");
    }
    Sequence dpg = g;
    dpg.values[0] += 1.0;
    return deconvolve(dpg, g);
}

Sequence step_response_from_t(const Sequence& t, double r0) {
    std::vector<double> y(t.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        acc += t.values[k];
        y[k] = r0 * acc;
    }
    return Sequence{std::move(y), t.sample_time};
}

namespace poly {

std::vector<double> mul(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
    return out;
}

std::vector<double> add(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> out(std::max(p.size(), q.size()), 0.0);
    std::copy(p.begin(), p.end(), out.begin());
    for (std::size_t i = 0; i < q.size(); ++i) out[i] += q[i];
    return out;
}

std::vector<double> scale(std::vector<double> p, double c) {
    for (double& v : p) v *= c;
    return p;
}

}  // namespace poly

}  // namespace fopid
