#include "fopid/frac.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace fopid {

namespace {

void validate(const OustaloupConfig& cfg) {
    if (cfg.order < 1) throw Error("oustaloup: order must be >= 1");
    if (!(cfg.omega_low > 0.0) || !(cfg.omega_low < cfg.omega_high)) {
        throw Error("oustaloup: need 0 < omega_low < omega_high");
    }
}

struct RecursivePairs {
    std::vector<double> zeros;  // corner frequencies, rad/s
    std::vector<double> poles;
    double gain = 1.0;          // matches |(j wg)^gamma| at the geometric mean
};

RecursivePairs oustaloup_pairs(double gamma, const OustaloupConfig& cfg) {
    const int pairs = 2 * cfg.order + 1;
    const double ratio = cfg.omega_high / cfg.omega_low;
    RecursivePairs out;
    for (int k = 1; k <= pairs; ++k) {
        const double base = (2.0 * k - 1.0) / (2.0 * pairs);
        out.zeros.push_back(cfg.omega_low * std::pow(ratio, base - gamma / (2.0 * pairs)));
        out.poles.push_back(cfg.omega_low * std::pow(ratio, base + gamma / (2.0 * pairs)));
    }
    // Gain match at the band's geometric mean, evaluated in product form.
    const double wg = std::sqrt(cfg.omega_low * cfg.omega_high);
    const std::complex<double> s(0.0, wg);
    std::complex<double> h = 1.0;
    for (int k = 0; k < pairs; ++k) h *= (s + out.zeros[k]) / (s + out.poles[k]);
    out.gain = std::pow(wg, gamma) / std::abs(h);
    return out;
}

// Bilinear images of the elementary continuous-time sections.
DiscreteTf section_from_pair(double wz, double wp, double ts) {
    const double c = 2.0 / ts;
    return make_discrete_tf({(c + wz) / (c + wp), (wz - c) / (c + wp)},
                            {1.0, (wp - c) / (c + wp)}, ts);
}

DiscreteTf integrator_section(double ts) {
    return make_discrete_tf({ts / 2.0, ts / 2.0}, {1.0, -1.0}, ts);
}

DiscreteTf differentiator_section(double ts) {
    const double c = 2.0 / ts;
    return make_discrete_tf({c, -c}, {1.0, 1.0}, ts);
}

struct SplitExponent {
    int integer = 0;
    double fraction = 0.0;  // in [0, 1); exactly 0 means pure integer order
};

SplitExponent split(double gamma) {
    const double fl = std::floor(gamma);
    return SplitExponent{static_cast<int>(fl), gamma - fl};
}

// Integral branch k * s^-lambda or derivative branch k * s^+mu as a section
// cascade: integer part as exact integrator/differentiator sections, the
// fractional remainder as one section per recursive zero/pole pair.
ControllerBranch make_power_branch(double k_gain, double exponent, int sign,
                                   const OustaloupConfig& cfg, double ts) {
    ControllerBranch branch;
    branch.gain = k_gain;
    const SplitExponent e = split(exponent);
    for (int i = 0; i < e.integer; ++i) {
        branch.sections.push_back(sign < 0 ? integrator_section(ts) : differentiator_section(ts));
    }
    if (e.fraction != 0.0) {
        const RecursivePairs pairs = oustaloup_pairs(sign < 0 ? -e.fraction : e.fraction, cfg);
        for (std::size_t i = 0; i < pairs.zeros.size(); ++i) {
            branch.sections.push_back(section_from_pair(pairs.zeros[i], pairs.poles[i], ts));
        }
        branch.gain *= pairs.gain;
    }
    return branch;
}

}  // namespace

ContinuousTf oustaloup_ct(double gamma, const OustaloupConfig& cfg) {
    validate(cfg);
    if (!(std::fabs(gamma) < 1.0)) {
        throw Error("oustaloup_ct requires |gamma| < 1; split off the integer part first (see fopid_discrete)");
    }
    if (gamma == 0.0) return make_continuous_tf({1.0}, {1.0});

    const RecursivePairs pairs = oustaloup_pairs(gamma, cfg);
    std::vector<double> num = {1.0};
    std::vector<double> den = {1.0};
    for (std::size_t k = 0; k < pairs.zeros.size(); ++k) {
        num = poly::mul(num, {1.0, pairs.zeros[k]});
        den = poly::mul(den, {1.0, pairs.poles[k]});
    }
    num = poly::scale(std::move(num), pairs.gain);
    return make_continuous_tf(std::move(num), std::move(den));
}

Sequence branch_impulse(const ControllerBranch& branch, std::size_t n, double sample_time) {
    Sequence x = unit_impulse(n + 1, sample_time);
    for (const DiscreteTf& section : branch.sections) x = filter(section, x);
    for (double& v : x.values) v *= branch.gain;
    return x;
}

DiscreteController fopid_discrete(const FoPidParams& phi, const OustaloupConfig& cfg,
                                  double sample_time, std::size_t n) {
    validate(cfg);
    if (!(sample_time > 0.0)) throw Error("fopid_discrete: sample_time must be > 0");
    if (phi.k_fp < 0.0 || phi.k_fi < 0.0 || phi.k_fd < 0.0) {
        throw Error("fopid_discrete: gains must be nonnegative");
    }
    if (phi.lambda < 0.0 || phi.lambda > 2.0 || phi.mu < 0.0 || phi.mu > 2.0) {
        throw Error("fopid_discrete: fractional orders must lie in [0, 2]");
    }

    DiscreteController out;
    out.impulse = constant_sequence(n + 1, 0.0, sample_time);

    if (phi.k_fp != 0.0) {
        out.proportional.gain = phi.k_fp;
        const Sequence imp = branch_impulse(out.proportional, n, sample_time);
        for (std::size_t k = 0; k <= n; ++k) out.impulse[k] += imp[k];
    }
    if (phi.k_fi != 0.0) {
        out.integral = make_power_branch(phi.k_fi, phi.lambda, -1, cfg, sample_time);
        const Sequence imp = branch_impulse(out.integral, n, sample_time);
        for (std::size_t k = 0; k <= n; ++k) out.impulse[k] += imp[k];
    }
    if (phi.k_fd != 0.0) {
        out.derivative = make_power_branch(phi.k_fd, phi.mu, +1, cfg, sample_time);
        const Sequence imp = branch_impulse(out.derivative, n, sample_time);
        for (std::size_t k = 0; k <= n; ++k) out.impulse[k] += imp[k];
    }

    const double c0 = out.impulse[0];
    if (std::fabs(c0) <= 1e-14 * std::max(1.0, max_abs(out.impulse))) {
        std::ostringstream msg;
        msg << "controller leading impulse coefficient " << c0
            << " vanishes after discretization; controller is not invertible";
        throw SingularityError(msg.str());
    }
    return out;
}

}  // namespace fopid
