#pragma once

#include <cstddef>
#include <vector>

#include "fopid/fictref.hpp"
#include "fopid/lti.hpp"

// Time-weighted and flat absolute-error performance indices, evaluated
// either from one-shot data through the fictitious reference (no plant
// model touched) or from a simulated closed loop (the conventional route
// used as oracle). Every evaluation is pure and reentrant; the optimizer
// relies on that.
namespace fopid {

enum class WeightKind { Linear, Saturated };

// Time-weight profile for the weighted index. Linear uses w_k = k * Ts
// (the k = 0 sample carries zero weight). Saturated replaces k * Ts by
// sat(k * Ts) = alpha * (1 - exp(-tau/alpha)), which is strictly
// increasing, bounded by alpha, and approximates tau near zero -- it tames
// the weight growth on long horizons.
struct WeightScheme {
    WeightKind kind = WeightKind::Linear;
    double sample_time = 1.0;
    double alpha = 1.0;  // Saturated only; must be > 0

    std::vector<double> weights(std::size_t count) const;  // w_0 .. w_{count-1}
};

double saturated_weight(double tau, double alpha);

// sum_k w_k |r0 - y_k| over an explicit weight vector (the weighted 1-norm
// of the error). Building block shared by all index evaluations.
double weighted_abs_error_sum(const std::vector<double>& w, const Sequence& y, double r0);

// Signed weighted error vector e_k = w_k (r0 - y_k); its 1-norm is the index.
std::vector<double> weighted_error_vector(const std::vector<double>& w, const Sequence& y, double r0);

// Indices from a closed-loop impulse response t under a step of height r0.
double itae_from_t(const Sequence& t, double r0, const WeightScheme& w);
double iae_from_t(const Sequence& t, double r0);

// Diagnostics for the data-driven evaluations: which fallback, if any, fired.
struct EvalDiag {
    bool guard_failed = false;
    bool non_finite = false;
};

// Finite value that dominates any feasible index; returned for candidates
// rejected by the singularity guard so population search stays well-defined.
double barrier_value(const DataRecord& data);

// Data-driven indices: fictitious reference -> estimated t -> index.
// Returns barrier_value(data) (and sets diag) when the singularity guard
// fails or an intermediate value overflows; no exception escapes for those.
double itae_data_driven(const DataRecord& data, const Sequence& c_imp, double r0,
                        const WeightScheme& w, double singularity_eps = 1e-6,
                        EvalDiag* diag = nullptr);
double iae_data_driven(const DataRecord& data, const Sequence& c_imp, double r0,
                       double singularity_eps = 1e-6, EvalDiag* diag = nullptr);

// Conventional simulation-side indices against a known plant impulse
// response (the oracle route). Throws on ill-posed loops.
double itae_simulated(const Sequence& p_imp, const Sequence& c_imp, double r0, const WeightScheme& w);
double iae_simulated(const Sequence& p_imp, const Sequence& c_imp, double r0);

// Decomposition of the noisy index into the clean weighted error vector and
// the noise-induced bias: j_noisy = ||ell + d||_1, d == 0 for zero noise.
// Diagnostic for synthetic studies where the injected noise is known.
struct NoiseDecomposition {
    Sequence ell;    // clean weighted error vector
    Sequence d;      // bias vector
    double j_noisy;  // index evaluated from the noisy data
};

NoiseDecomposition noise_bias(const DataRecord& data_noisy, const Sequence& noise,
                              const Sequence& c_imp, double r0, const WeightScheme& w,
                              double singularity_eps = 1e-6);

// Centered moving average with shrinking windows at the boundaries.
// Denoising hook applied before tuning when configured; window must be odd.
Sequence prefilter_moving_average(const Sequence& y_noisy, std::size_t window);

}  // namespace fopid
