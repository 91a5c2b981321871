#include "fopid/pipeline.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace fopid {

PlantModel::PlantModel(ContinuousTf tf, std::string label)
    : tf_(std::move(tf)), label_(std::move(label)) {}

PlantModel::PlantModel(DiscreteTf tf, std::string label)
    : tf_(std::move(tf)), label_(std::move(label)) {}

DiscreteTf PlantModel::discretize(double sample_time) const {
    counter_->fetch_add(1);
    if (std::holds_alternative<ContinuousTf>(tf_)) {
        return tustin(std::get<ContinuousTf>(tf_), sample_time);
    }
    if (std::holds_alternative<DiscreteTf>(tf_)) {
        const DiscreteTf& g = std::get<DiscreteTf>(tf_);
        if (g.sample_time != sample_time) {
            throw Error("plant '" + label_ + "' was discretized at a different sample_time");
        }
        return g;
    }
    throw Error("plant model is empty");
}

Sequence PlantModel::impulse(double sample_time, std::size_t n) const {
    return impulse_response(discretize(sample_time), n);
}

PlantModel full_plant_preset() {
    // 9 / ((s + 1)(s^2 + 1.2 s + 9)): unit DC gain, resonant pair at
    // 3 rad/s with damping 0.2 plus a real pole.
    return PlantModel(make_continuous_tf({9.0}, {1.0, 2.2, 10.2, 9.0}), "full");
}

PlantModel reduced_plant_preset() {
    // Second-order fit that keeps the resonant pair and drops the real
    // pole; deliberately imperfect, as an identified model would be.
    return PlantModel(make_continuous_tf({9.0}, {1.0, 1.2, 9.0}), "reduced");
}

std::size_t TuningConfig::horizon_steps() const {
    if (!(sample_time > 0.0)) throw Error("config: sample_time must be > 0");
    if (!(horizon_seconds > 0.0)) throw Error("config: horizon_seconds must be > 0");
    const double steps = horizon_seconds / sample_time;
    const double rounded = std::round(steps);
    if (std::fabs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
        throw Error("config: horizon_seconds must be an integer multiple of sample_time");
    }
    return static_cast<std::size_t>(rounded);
}

Bounds default_bounds(bool lambda_fixed) {
    Bounds b;
    b.lower = {0.0, 0.0, 0.0, 0.0, 0.0};
    b.upper = {10.0, 10.0, 10.0, 2.0, 2.0};
    if (lambda_fixed) {
        b.lower.erase(b.lower.begin() + 3);
        b.upper.erase(b.upper.begin() + 3);
    }
    return b;
}

TuningConfig default_tuning_config() {
    TuningConfig cfg;
    cfg.weight.sample_time = cfg.sample_time;
    cfg.bounds = default_bounds(false);
    return cfg;
}

FoPidParams decode_params(std::span<const double> x, const std::optional<double>& fixed_lambda) {
    FoPidParams phi;
    if (fixed_lambda) {
        if (x.size() != 4) throw Error("parameter vector must have 4 entries when lambda is pinned");
        phi = {x[0], x[1], x[2], *fixed_lambda, x[3]};
    } else {
        if (x.size() != 5) throw Error("parameter vector must have 5 entries");
        phi = {x[0], x[1], x[2], x[3], x[4]};
    }
    return phi;
}

std::vector<double> encode_params(const FoPidParams& phi, const std::optional<double>& fixed_lambda) {
    if (fixed_lambda) return {phi.k_fp, phi.k_fi, phi.k_fd, phi.mu};
    return {phi.k_fp, phi.k_fi, phi.k_fd, phi.lambda, phi.mu};
}

namespace {

WeightScheme weight_on_grid(const TuningConfig& cfg, double sample_time) {
    WeightScheme w = cfg.weight;
    w.sample_time = sample_time;
    return w;
}

Bounds effective_bounds(const TuningConfig& cfg) {
    if (!cfg.bounds.lower.empty()) {
        const std::size_t want = cfg.fixed_lambda ? 4 : 5;
        if (cfg.bounds.dimension() != want) {
            throw Error("config: bounds dimension does not match the number of free parameters");
        }
        return cfg.bounds;
    }
    return default_bounds(cfg.fixed_lambda.has_value());
}

PsoConfig pso_with_incumbent(const TuningConfig& cfg) {
    PsoConfig pso = cfg.pso;
    FoPidParams phi0 = cfg.incumbent;
    if (cfg.fixed_lambda) phi0.lambda = *cfg.fixed_lambda;
    pso.initial_points.insert(pso.initial_points.begin(), encode_params(phi0, cfg.fixed_lambda));
    return pso;
}

}  // namespace

DataRecord collect_closed_loop_data(const PlantModel& plant, const FoPidParams& phi0,
                                    const TuningConfig& cfg) {
    const std::size_t n = cfg.horizon_steps();
    const Sequence p = plant.impulse(cfg.sample_time, n);
    DiscreteController ctrl;
    try {
        ctrl = fopid_discrete(phi0, cfg.oustaloup, cfg.sample_time, n);
    } catch (const SingularityError&) {
        // A controller with no leading response excites nothing: u would be
        // identically zero, violating the u[0] != 0 assumption.
        throw DataInvalidError("data collection controller produces no excitation (u would be 0)");
    }
    const Sequence r = constant_sequence(n + 1, cfg.setpoint, cfg.sample_time);

    // u = (delta + c*p)^-1 * (c * r),  y = p * u
    Sequence loop = conv_trunc(ctrl.impulse, p);
    if (1.0 + loop[0] == 0.0) throw AlgebraicLoopError("data collection loop is ill-posed");
    loop[0] += 1.0;
    Sequence u = deconvolve(loop, conv_trunc(ctrl.impulse, r));
    Sequence y = conv_trunc(p, u);

    if (u[0] == 0.0) {
        throw DataInvalidError("data collection produced u[0] == 0 (controller gain or setpoint is zero)");
    }
    std::ostringstream meta;
    meta << "closed-loop step record: plant=" << plant.label() << " r0=" << cfg.setpoint
         << " Ts=" << cfg.sample_time << " N=" << n;
    return make_data_record(std::move(u), std::move(y), meta.str());
}

namespace {

TuningOutcome run_search(const Objective& objective, const TuningConfig& cfg,
                         const std::string& strategy) {
    const Bounds bounds = effective_bounds(cfg);
    const PsoResult res = pso_minimize(objective, bounds, pso_with_incumbent(cfg));
    if (!std::isfinite(res.best_objective)) {
        std::ostringstream msg;
        msg << "optimizer failed to find a feasible candidate for " << strategy << " after "
            << res.evaluations << " evaluations";
        throw Error(msg.str());
    }
    TuningOutcome out;
    out.strategy = strategy;
    out.phi_star = decode_params(res.best_position, cfg.fixed_lambda);
    out.objective_value = res.best_objective;
    out.trace = res.trace;
    out.evaluations = res.evaluations;
    return out;
}

}  // namespace

TuningOutcome tune_fr(const DataRecord& data, const TuningConfig& cfg) {
    // The tuning horizon is the data horizon; no plant model is touched.
    const std::size_t n = data.u.size() - 1;
    const double ts = data.u.sample_time;
    const WeightScheme w = weight_on_grid(cfg, ts);
    const double r0 = cfg.setpoint;

    auto objective = [&](std::span<const double> x) -> double {
        try {
            const FoPidParams phi = decode_params(x, cfg.fixed_lambda);
            const DiscreteController ctrl = fopid_discrete(phi, cfg.oustaloup, ts, n);
            return cfg.criterion == Criterion::Itae
                       ? itae_data_driven(data, ctrl.impulse, r0, w, cfg.singularity_eps)
                       : iae_data_driven(data, ctrl.impulse, r0, cfg.singularity_eps);
        } catch (const Error&) {
            return barrier_value(data);
        }
    };

    TuningOutcome out = run_search(objective, cfg,
                                   cfg.criterion == Criterion::Itae ? "data-driven itae"
                                                                    : "data-driven iae");
    const DiscreteController ctrl = fopid_discrete(out.phi_star, cfg.oustaloup, ts, n);
    out.t_est = fictitious_data(data, ctrl.impulse, cfg.singularity_eps).t_est;
    return out;
}

TuningOutcome tune_sim(const PlantModel& plant, const TuningConfig& cfg) {
    const std::size_t n = cfg.horizon_steps();
    const double ts = cfg.sample_time;
    const WeightScheme w = weight_on_grid(cfg, ts);
    const double r0 = cfg.setpoint;
    const Sequence p_imp = plant.impulse(ts, n);  // one model invocation, reused
    const double barrier = 1e12 * (1.0 + std::fabs(r0) * static_cast<double>(n + 1));

    auto objective = [&](std::span<const double> x) -> double {
        try {
            const FoPidParams phi = decode_params(x, cfg.fixed_lambda);
            const DiscreteController ctrl = fopid_discrete(phi, cfg.oustaloup, ts, n);
            const double j = cfg.criterion == Criterion::Itae
                                 ? itae_simulated(p_imp, ctrl.impulse, r0, w)
                                 : iae_simulated(p_imp, ctrl.impulse, r0);
            return std::isfinite(j) ? j : barrier;
        } catch (const Error&) {
            return barrier;
        }
    };

    TuningOutcome out = run_search(objective, cfg, "simulated(" + plant.label() + ")");
    const DiscreteController ctrl = fopid_discrete(out.phi_star, cfg.oustaloup, ts, n);
    out.t_est = closed_loop_impulse(p_imp, ctrl.impulse);
    return out;
}

Sequence closed_loop_step_response(const PlantModel& plant, const FoPidParams& phi,
                                   const TuningConfig& cfg) {
    const std::size_t n = cfg.horizon_steps();
    const Sequence p_imp = plant.impulse(cfg.sample_time, n);
    const DiscreteController ctrl = fopid_discrete(phi, cfg.oustaloup, cfg.sample_time, n);
    return step_response_from_t(closed_loop_impulse(p_imp, ctrl.impulse), cfg.setpoint);
}

Metrics metrics_from_step_response(const Sequence& y, double r0, const WeightScheme& w) {
    Metrics m;
    if (!all_finite(y)) {
        m.stable = false;
        m.itae = m.iae = m.overshoot_pct = m.settling_time_s = m.steady_state_error =
            std::numeric_limits<double>::quiet_NaN();
        return m;
    }
    m.itae = weighted_abs_error_sum(w.weights(y.size()), y, r0);
    m.iae = weighted_abs_error_sum(std::vector<double>(y.size(), 1.0), y, r0);

    double peak = -std::numeric_limits<double>::infinity();
    for (double v : y.values) peak = std::max(peak, v);
    m.overshoot_pct = r0 != 0.0 ? std::max(0.0, (peak - r0) / r0 * 100.0) : 0.0;
    m.steady_state_error = std::fabs(r0 - y.values.back());

    // First step after which the response stays inside the 2% band.
    const double band = 0.02 * std::fabs(r0);
    std::size_t k_settle = y.size();
    for (std::size_t k = y.size(); k-- > 0;) {
        if (std::fabs(y[k] - r0) <= band) {
            k_settle = k;
        } else {
            break;
        }
    }
    m.settling_time_s = k_settle < y.size() ? static_cast<double>(k_settle) * y.sample_time
                                            : std::numeric_limits<double>::infinity();
    return m;
}

Metrics evaluate_controller(const PlantModel& plant, const FoPidParams& phi, const TuningConfig& cfg) {
    Sequence y;
    try {
        y = closed_loop_step_response(plant, phi, cfg);
    } catch (const NonFiniteError&) {
        Metrics m;
        m.stable = false;
        m.itae = m.iae = m.overshoot_pct = m.settling_time_s = m.steady_state_error =
            std::numeric_limits<double>::quiet_NaN();
        return m;
    }
    return metrics_from_step_response(y, cfg.setpoint, weight_on_grid(cfg, cfg.sample_time));
}

CompareReport compare_report(const std::vector<TuningOutcome>& outcomes, const PlantModel& plant,
                             const TuningConfig& cfg) {
    if (outcomes.empty()) throw Error("compare_report needs at least one outcome");
    CompareReport report;
    report.setpoint = cfg.setpoint;
    for (const TuningOutcome& o : outcomes) {
        CompareRow row;
        row.strategy = o.strategy;
        row.phi_star = o.phi_star;
        row.surrogate_objective = o.objective_value;
        row.realized = evaluate_controller(plant, o.phi_star, cfg);
        report.rows.push_back(row);
        try {
            report.step_responses.emplace_back(o.strategy,
                                               closed_loop_step_response(plant, o.phi_star, cfg));
        } catch (const Error&) {
            // unstable candidate: skip the trace, the metrics row carries the flag
        }
    }
    return report;
}

namespace {

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    if (std::isnan(v)) return "n/a";
    if (std::isinf(v)) return "inf";
    os << std::setprecision(prec) << v;
    return os.str();
}

}  // namespace

std::string render_metrics(const Metrics& m) {
    std::ostringstream os;
    os << "itae=" << fmt(m.itae) << " iae=" << fmt(m.iae) << " overshoot%=" << fmt(m.overshoot_pct, 4)
       << " settling_s=" << fmt(m.settling_time_s, 4) << " sse=" << fmt(m.steady_state_error, 4)
       << (m.stable ? "" : " UNSTABLE");
    return os.str();
}

std::string render_table(const CompareReport& report) {
    std::ostringstream os;
    os << std::left << std::setw(24) << "strategy" << std::setw(46) << "phi*(kfp,kfi,kfd,lambda,mu)"
       << std::setw(16) << "surrogate_J" << std::setw(16) << "itae" << std::setw(16) << "iae"
       << std::setw(12) << "overshoot%" << std::setw(12) << "settling_s" << std::setw(12) << "sse"
       << "\n";
    for (const CompareRow& r : report.rows) {
        std::ostringstream phi;
        phi << "(" << fmt(r.phi_star.k_fp, 5) << ", " << fmt(r.phi_star.k_fi, 5) << ", "
            << fmt(r.phi_star.k_fd, 5) << ", " << fmt(r.phi_star.lambda, 5) << ", "
            << fmt(r.phi_star.mu, 5) << ")";
        os << std::left << std::setw(24) << r.strategy << std::setw(46) << phi.str() << std::setw(16)
           << fmt(r.surrogate_objective) << std::setw(16) << fmt(r.realized.itae) << std::setw(16)
           << fmt(r.realized.iae) << std::setw(12) << fmt(r.realized.overshoot_pct, 4) << std::setw(12)
           << fmt(r.realized.settling_time_s, 4) << std::setw(12) << fmt(r.realized.steady_state_error, 4);
        if (!r.realized.stable) os << "  UNSTABLE";
        os << "\n";
    }
    return os.str();
}

}  // namespace fopid
