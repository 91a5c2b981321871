#pragma once

#include <cstddef>

#include "fopid/lti.hpp"

// Band-limited rational approximation of fractional powers of s and the
// assembly of the five-parameter FO-PID controller
//   C(s; phi) = k_fp + k_fi * s^-lambda + k_fd * s^mu
// as three parallel branches, each discretized with the bilinear transform.
namespace fopid {

// The five tunable controller values.
struct FoPidParams {
    double k_fp = 0.0;
    double k_fi = 0.0;
    double k_fd = 0.0;
    double lambda = 0.0;  // integral order, [0, 2]
    double mu = 0.0;      // derivative order, [0, 2]
};

struct OustaloupConfig {
    int order = 5;               // order-N design places 2N+1 zero/pole pairs
    double omega_low = 1.0e-6;   // rad/s
    double omega_high = 1.0e3;   // rad/s
};

// Recursive zero/pole approximation of s^gamma over cfg's frequency band,
// gain-matched to the ideal |(j w)^gamma| at the band's geometric-mean
// frequency. `order` follows the usual toolbox convention: an order-N
// design distributes 2N+1 recursive zero/pole pairs across the band.
// Requires |gamma| < 1; integer parts must be split off first
// (fopid_discrete does this). gamma == 0 returns the constant 1 exactly.
ContinuousTf oustaloup_ct(double gamma, const OustaloupConfig& cfg = {});

// One controller branch as a gain and a cascade of first-order discrete
// sections. The cascade form matters: the band-limited filter clusters
// poles near z = 1, and expanding it into a single high-order difference
// equation is numerically unstable, while per-section recursions are exact.
struct ControllerBranch {
    double gain = 0.0;                // overall branch gain; 0 means absent
    std::vector<DiscreteTf> sections; // applied in order; empty = unity
};

// One discretized controller: the three parallel branches and the combined
// truncated impulse response (sum of gain-scaled branch responses).
struct DiscreteController {
    ControllerBranch proportional;
    ControllerBranch integral;
    ControllerBranch derivative;
    Sequence impulse;  // length n+1
};

// Branch impulse response: unit impulse through the section cascade, scaled
// by the branch gain.
Sequence branch_impulse(const ControllerBranch& branch, std::size_t n, double sample_time);

// Build C(s; phi), split each fractional exponent into integer part
// (realized exactly as pure integrator/differentiator sections) plus
// fractional part (one section per recursive zero/pole pair), discretize
// every section with the bilinear map, and sum the branch impulse
// responses. Throws SingularityError when the combined leading impulse
// coefficient vanishes (the controller would not be invertible in the
// convolution sense).
DiscreteController fopid_discrete(const FoPidParams& phi, const OustaloupConfig& cfg,
                                  double sample_time, std::size_t n);

}  // namespace fopid
