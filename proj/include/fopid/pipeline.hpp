#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fopid/fictref.hpp"
#include "fopid/frac.hpp"
#include "fopid/objective.hpp"
#include "fopid/optimize.hpp"

// End-to-end tuning strategies and their comparison: the data-driven route
// (one recorded experiment, no plant model) against conventional
// simulation-based minimization using either the true plant or a reduced
// model of it.
namespace fopid {

// Plant under control, either a CT transfer function (discretized with
// tustin on demand) or an already-discrete one. Carries a shared invocation
// counter so tests can assert how often a strategy touched the model.
class PlantModel {
  public:
    PlantModel() = default;
    PlantModel(ContinuousTf tf, std::string label);
    PlantModel(DiscreteTf tf, std::string label);

    DiscreteTf discretize(double sample_time) const;
    Sequence impulse(double sample_time, std::size_t n) const;

    const std::string& label() const { return label_; }
    long invocations() const { return counter_ ? counter_->load() : 0; }

  private:
    std::variant<std::monostate, ContinuousTf, DiscreteTf> tf_;
    std::string label_;
    std::shared_ptr<std::atomic<long>> counter_ = std::make_shared<std::atomic<long>>(0);
};

// Built-in benchmark pair: a highly oscillatory third-order process and its
// second-order reduced model (same resonant pair, real pole dropped). The
// reduced model stands in for an imperfect identification result.
PlantModel full_plant_preset();
PlantModel reduced_plant_preset();

enum class Criterion { Itae, Iae };

struct TuningConfig {
    double sample_time = 0.01;      // s
    double horizon_seconds = 25.0;  // evaluation window, N = horizon / Ts
    double setpoint = 1.0;

    WeightScheme weight{WeightKind::Linear, 0.01, 1.0};
    Criterion criterion = Criterion::Itae;

    // Search box over (k_fp, k_fi, k_fd, lambda, mu), minus any pinned
    // parameter; defaults to [0,10]^3 x [0,2]^2.
    Bounds bounds;
    std::optional<double> fixed_lambda;

    OustaloupConfig oustaloup;
    PsoConfig pso;
    double singularity_eps = 1e-6;
    std::optional<std::size_t> prefilter_window;

    // Controller used to record the one-shot data; also seeded into the
    // swarm as the incumbent, so the tuned objective can never be worse.
    FoPidParams incumbent{1.0, 0.0, 1.0, 0.0, 1.0};

    std::size_t horizon_steps() const;  // N; horizon/Ts must be integral
};

TuningConfig default_tuning_config();
Bounds default_bounds(bool lambda_fixed = false);

// Mapping between the optimizer vector and FoPidParams, honoring a pinned
// lambda. Vector order: k_fp, k_fi, k_fd, [lambda,] mu.
FoPidParams decode_params(std::span<const double> x, const std::optional<double>& fixed_lambda);
std::vector<double> encode_params(const FoPidParams& phi, const std::optional<double>& fixed_lambda);

struct Metrics {
    double itae = 0.0;
    double iae = 0.0;
    double overshoot_pct = 0.0;
    double settling_time_s = 0.0;   // +inf when the 2% band is never held
    double steady_state_error = 0.0;
    bool stable = true;             // false when the response is non-finite
};

struct TuningOutcome {
    std::string strategy;
    FoPidParams phi_star;
    double objective_value = 0.0;  // value of the tuning surface at phi_star
    Sequence t_est;                // closed-loop impulse response at phi_star
    std::vector<TracePoint> trace;
    std::size_t evaluations = 0;
    // Realized metrics on the evaluation plant; filled by compare_report /
    // evaluate_controller, never by the tuning itself (the data-driven
    // strategy has no plant to evaluate against).
    std::optional<Metrics> realized;
};

// Simulate the closed loop with the incumbent controller under a step of
// cfg.setpoint and record (u, y) over the horizon. One plant invocation.
DataRecord collect_closed_loop_data(const PlantModel& plant, const FoPidParams& phi0,
                                    const TuningConfig& cfg);

// Data-driven tuning: minimizes the fictitious-reference index over the
// box. Touches only the record, never a plant model. Throws Error when the
// optimizer cannot produce a feasible candidate (trace attached to the
// message).
TuningOutcome tune_fr(const DataRecord& data, const TuningConfig& cfg);

// Conventional tuning: minimizes the simulated index against the given
// plant (true plant or reduced model).
TuningOutcome tune_sim(const PlantModel& plant, const TuningConfig& cfg);

// Step-response metrics of the closed loop (plant, phi) at cfg's horizon.
Metrics evaluate_controller(const PlantModel& plant, const FoPidParams& phi, const TuningConfig& cfg);
Sequence closed_loop_step_response(const PlantModel& plant, const FoPidParams& phi, const TuningConfig& cfg);
Metrics metrics_from_step_response(const Sequence& y, double r0, const WeightScheme& w);

struct CompareRow {
    std::string strategy;
    FoPidParams phi_star;
    double surrogate_objective = 0.0;  // index value seen by the tuner
    Metrics realized;                  // measured on the evaluation plant
};

struct CompareReport {
    std::vector<CompareRow> rows;
    // Step response on the evaluation plant per strategy, for plotting.
    std::vector<std::pair<std::string, Sequence>> step_responses;
    double setpoint = 1.0;
};

CompareReport compare_report(const std::vector<TuningOutcome>& outcomes, const PlantModel& plant,
                             const TuningConfig& cfg);
std::string render_table(const CompareReport& report);
std::string render_metrics(const Metrics& m);

}  // namespace fopid
