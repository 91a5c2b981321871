#include "fopid/objective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fopid/kernels.hpp"

namespace fopid {

std::vector<double> WeightScheme::weights(std::size_t count) const {
    if (!(sample_time > 0.0)) throw Error("weight scheme: sample_time must be > 0");
    if (kind == WeightKind::Saturated && !(alpha > 0.0)) {
        throw Error("weight scheme: saturated weights need alpha > 0");
    }
    std::vector<double> w(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double tau = static_cast<double>(k) * sample_time;
        w[k] = kind == WeightKind::Linear ? tau : saturated_weight(tau, alpha);
    }
    return w;
}

double saturated_weight(double tau, double alpha) {
    if (tau < 0.0) throw Error("saturated_weight: tau must be >= 0");
    if (!(alpha > 0.0)) throw Error("saturated_weight: alpha must be > 0");
    // alpha * (1 - exp(-tau/alpha)); capped one ulp below alpha so the
    // strict bound survives the regime where expm1 rounds to -1.
    const double s = alpha * (-std::expm1(-tau / alpha));
    return std::min(s, std::nextafter(alpha, 0.0));
}

double weighted_abs_error_sum(const std::vector<double>& w, const Sequence& y, double r0) {
    if (w.size() != y.size()) throw Error("weighted error: weight/sequence length mismatch");
    return kernels::weighted_abs_error(w.data(), y.data(), r0, w.size());
}

std::vector<double> weighted_error_vector(const std::vector<double>& w, const Sequence& y, double r0) {
    if (w.size() != y.size()) throw Error("weighted error: weight/sequence length mismatch");
    std::vector<double> e(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) e[k] = w[k] * (r0 - y[k]);
    return e;
}

namespace {

void require_matching_grid(const WeightScheme& w, const Sequence& t) {
    if (w.sample_time != t.sample_time) {
        throw Error("weight scheme sample_time does not match the sequence");
    }
}

double l1(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += std::fabs(x);
    return acc;
}

}  // namespace

double itae_from_t(const Sequence& t, double r0, const WeightScheme& w) {
    require_matching_grid(w, t);
    const Sequence y = step_response_from_t(t, r0);
    return weighted_abs_error_sum(w.weights(t.size()), y, r0);
}

double iae_from_t(const Sequence& t, double r0) {
    const Sequence y = step_response_from_t(t, r0);
    return weighted_abs_error_sum(std::vector<double>(t.size(), 1.0), y, r0);
}

double barrier_value(const DataRecord& data) {
    return 1e12 * (1.0 + sum_abs(data.y));
}

namespace {

template <class IndexFn>
double data_driven_index(const DataRecord& data, const Sequence& c_imp, double eps,
                         EvalDiag* diag, IndexFn&& index) {
    if (diag) *diag = EvalDiag{};
    try {
        const FictitiousData fd = fictitious_data(data, c_imp, eps);
        const double j = index(fd.t_est);
        if (!std::isfinite(j)) {
            if (diag) diag->non_finite = true;
            return barrier_value(data);
        }
        return j;
    } catch (const SingularityError&) {
        if (diag) diag->guard_failed = true;
        return barrier_value(data);
    } catch (const NonFiniteError&) {
        if (diag) diag->non_finite = true;
        return barrier_value(data);
    }
}

}  // namespace

double itae_data_driven(const DataRecord& data, const Sequence& c_imp, double r0,
                        const WeightScheme& w, double singularity_eps, EvalDiag* diag) {
    return data_driven_index(data, c_imp, singularity_eps, diag,
                             [&](const Sequence& t) { return itae_from_t(t, r0, w); });
}

double iae_data_driven(const DataRecord& data, const Sequence& c_imp, double r0,
                       double singularity_eps, EvalDiag* diag) {
    return data_driven_index(data, c_imp, singularity_eps, diag,
                             [&](const Sequence& t) { return iae_from_t(t, r0); });
}

double itae_simulated(const Sequence& p_imp, const Sequence& c_imp, double r0, const WeightScheme& w) {
    return itae_from_t(closed_loop_impulse(p_imp, c_imp), r0, w);
}

double iae_simulated(const Sequence& p_imp, const Sequence& c_imp, double r0) {
    return iae_from_t(closed_loop_impulse(p_imp, c_imp), r0);
}

NoiseDecomposition noise_bias(const DataRecord& data_noisy, const Sequence& noise,
                              const Sequence& c_imp, double r0, const WeightScheme& w,
                              double singularity_eps) {
    if (noise.size() != data_noisy.y.size() || noise.sample_time != data_noisy.y.sample_time) {
        throw Error("noise_bias: noise sequence does not match the data grid");
    }
    Sequence y_clean = data_noisy.y;
    for (std::size_t k = 0; k < y_clean.size(); ++k) y_clean[k] -= noise[k];
    const DataRecord data_clean = make_data_record(data_noisy.u, std::move(y_clean), data_noisy.meta);

    auto error_vec = [&](const DataRecord& data, const char* which) {
        try {
            const FictitiousData fd = fictitious_data(data, c_imp, singularity_eps);
            const Sequence y = step_response_from_t(fd.t_est, r0);
            return weighted_error_vector(w.weights(y.size()), y, r0);
        } catch (const SingularityError& e) {
            std::ostringstream msg;
            msg << "noise_bias: singularity guard failed for the " << which << " data: " << e.what();
            throw Error(msg.str());
        }
    };

    const std::vector<double> ell = error_vec(data_clean, "clean");
    const std::vector<double> noisy = error_vec(data_noisy, "noisy");
    std::vector<double> d(ell.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = noisy[k] - ell[k];

    NoiseDecomposition out;
    out.ell = Sequence{ell, data_noisy.y.sample_time};
    out.d = Sequence{std::move(d), data_noisy.y.sample_time};
    out.j_noisy = l1(noisy);
    return out;
}

Sequence prefilter_moving_average(const Sequence& y_noisy, std::size_t window) {
    if (window % 2 == 0) throw Error("prefilter: window must be odd");
    if (window > y_noisy.size()) throw Error("prefilter: window exceeds sequence length");
    const std::size_t half = window / 2;
    const std::size_t n = y_noisy.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t lo = k >= half ? k - half : 0;
        const std::size_t hi = std::min(n - 1, k + half);
        double acc = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) acc += y_noisy[i];
        out[k] = acc / static_cast<double>(hi - lo + 1);
    }
    return Sequence{std::move(out), y_noisy.sample_time};
}

}  // namespace fopid
