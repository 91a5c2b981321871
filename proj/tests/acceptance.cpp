// Acceptance suite: end-to-end checks of the library's core guarantees at
// the benchmark scale. Each criterion prints one PASS/FAIL line; the
// process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fopid/io.hpp"
#include "fopid/pipeline.hpp"

using namespace fopid;

namespace {

struct Summary {
    int failures = 0;
    int index = 0;
};

void run_criterion(Summary& s, const std::string& name, const std::function<std::string()>& body) {
    ++s.index;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    if (detail.rfind("FAIL", 0) == 0) pass = false;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %2d: %-38s (%6.2f s) %s\n", pass ? "PASS" : "FAIL", s.index,
                name.c_str(), secs, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++s.failures;
}

std::string fail(const std::string& why) { return "FAIL: " + why; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

constexpr double kTs = 0.01;

DataRecord collect(const PlantModel& plant, std::size_t n) {
    TuningConfig cfg = default_tuning_config();
    cfg.sample_time = kTs;
    cfg.horizon_seconds = static_cast<double>(n) * kTs;
    cfg.weight.sample_time = kTs;
    return collect_closed_loop_data(plant, cfg.incumbent, cfg);
}

FoPidParams random_phi(std::mt19937& rng) {
    std::uniform_real_distribution<double> gain(0.0, 10.0);
    std::uniform_real_distribution<double> order(0.0, 2.0);
    return FoPidParams{gain(rng), gain(rng), gain(rng), order(rng), order(rng)};
}

// Draw admissible candidates: the controller builds, the singularity guard
// passes, both evaluation routes stay finite, and the closed loop is not
// explosively unstable (its impulse-response growth would otherwise amplify
// round-off past what exact identities can be checked against in doubles).
template <class Fn>
void for_admissible_phi(const DataRecord& data, const Sequence& p_imp, std::uint32_t seed,
                        int count, Fn&& fn) {
    std::mt19937 rng(seed);
    const std::size_t n = data.u.size() - 1;
    int tested = 0;
    int attempts = 0;
    while (tested < count) {
        if (++attempts > 200 * count) throw Error("could not draw enough admissible candidates");
        const FoPidParams phi = random_phi(rng);
        try {
            const DiscreteController c = fopid_discrete(phi, {}, kTs, n);
            const FictitiousData fd = fictitious_data(data, c.impulse);
            const Sequence t_model = closed_loop_impulse(p_imp, c.impulse);
            if (max_abs(t_model) > 1e3) continue;
            fn(phi, c.impulse, fd, t_model);
            ++tested;
        } catch (const Error&) {
            continue;
        }
    }
}

// Dense oracle: materialize the Toeplitz matrix and run a generic forward
// substitution, independent of the sequence solver.
std::vector<double> dense_triangular_solve(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= a[i - j] * x[j];
        x[i] = s / a[0];
    }
    return x;
}

}  // namespace

int main() {
    Summary summary;
    const PlantModel plant_full = full_plant_preset();
    const PlantModel plant_reduced = reduced_plant_preset();
    const WeightScheme w_lin{WeightKind::Linear, kTs, 1.0};

    const std::size_t n_small = 500;
    const DataRecord data = collect(plant_full, n_small);
    const Sequence p_small = plant_full.impulse(kTs, n_small);

    // 1. Equivalence of the data-driven and simulated time-weighted index.
    run_criterion(summary, "data-driven/simulated ITAE equivalence", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for_admissible_phi(data, p_small, 101, 20,
                           [&](const FoPidParams&, const Sequence& c_imp, const FictitiousData&,
                               const Sequence&) {
                               const double jd = itae_data_driven(data, c_imp, 1.0, w_lin);
                               const double js = itae_simulated(p_small, c_imp, 1.0, w_lin);
                               worst = std::max(worst, std::fabs(jd - js) / std::fabs(js));
                           });
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (worst > 1e-6) return fail("relative gap " + fmt(worst) + " > 1e-6");
        if (secs > 10.0) return fail("took longer than the 10 s budget");
        return "worst relative gap " + fmt(worst);
    });

    // 2. Replay: the fictitious reference drives the candidate loop back
    // onto the recorded output.
    run_criterion(summary, "fictitious-reference replay", [&] {
        const double ymax = max_abs(data.y);
        double worst = 0.0;
        for_admissible_phi(data, p_small, 202, 20,
                           [&](const FoPidParams&, const Sequence&, const FictitiousData& fd,
                               const Sequence& t_model) {
                               const Sequence replay = conv_trunc(t_model, fd.r_tilde);
                               for (std::size_t k = 0; k < replay.size(); ++k) {
                                   worst = std::max(worst, std::fabs(replay[k] - data.y[k]));
                               }
                           });
        if (worst > 1e-8 * ymax) return fail("replay error " + fmt(worst) + " > 1e-8*max|y|");
        return "worst abs error " + fmt(worst) + " vs bound " + fmt(1e-8 * ymax);
    });

    // 3. Toeplitz diagonal identity and agreement with a dense solve.
    run_criterion(summary, "Toeplitz solve identities", [&] {
        double worst_diag = 0.0;
        double worst_dense = 0.0;
        for_admissible_phi(data, p_small, 303, 5,
                           [&](const FoPidParams&, const Sequence&, const FictitiousData& fd,
                               const Sequence&) {
                               const double lhs = fd.t_est[0] * fd.leading_value;
                               worst_diag = std::max(
                                   worst_diag, std::fabs(lhs - data.y[0]) /
                                                   std::max(1e-300, std::fabs(data.y[0])));
                               const auto dense =
                                   dense_triangular_solve(fd.r_tilde.values, data.y.values);
                               const double scale = std::max(1e-300, max_abs(fd.t_est));
                               for (std::size_t k = 0; k < dense.size(); ++k) {
                                   worst_dense = std::max(
                                       worst_dense, std::fabs(dense[k] - fd.t_est[k]) / scale);
                               }
                           });
        if (worst_diag > 1e-12) return fail("diagonal identity off by " + fmt(worst_diag));
        if (worst_dense > 1e-10) return fail("dense-solve gap " + fmt(worst_dense));
        return "diag " + fmt(worst_diag) + ", dense gap " + fmt(worst_dense);
    });

    // 4. Same equivalence for the flat-weight index.
    run_criterion(summary, "data-driven/simulated IAE equivalence", [&] {
        double worst = 0.0;
        for_admissible_phi(data, p_small, 404, 20,
                           [&](const FoPidParams&, const Sequence& c_imp, const FictitiousData&,
                               const Sequence&) {
                               const double jd = iae_data_driven(data, c_imp, 1.0);
                               const double js = iae_simulated(p_small, c_imp, 1.0);
                               worst = std::max(worst, std::fabs(jd - js) / std::fabs(js));
                           });
        if (worst > 1e-6) return fail("relative gap " + fmt(worst) + " > 1e-6");
        return "worst relative gap " + fmt(worst);
    });

    // 5. Noise-bias decomposition at several noise intensities.
    run_criterion(summary, "noise-bias decomposition", [&] {
        double range = 0.0;
        {
            double lo = data.y[0], hi = data.y[0];
            for (double v : data.y.values) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            range = hi - lo;
        }
        const std::size_t n = data.u.size() - 1;

        // zero noise first: bias must vanish identically
        {
            const Sequence zero = constant_sequence(n + 1, 0.0, kTs);
            const DiscreteController c0 = fopid_discrete({1, 0, 1, 0, 1}, {}, kTs, n);
            const NoiseDecomposition nd = noise_bias(data, zero, c0.impulse, 1.0, w_lin);
            if (max_abs(nd.d) != 0.0) return fail("bias not identically zero for zero noise");
        }

        std::mt19937 rng(505);
        double worst = 0.0;
        for (double level : {0.01, 0.05, 0.10}) {
            std::normal_distribution<double> gauss(0.0, level * range);
            std::vector<double> nv(n + 1);
            for (double& x : nv) x = gauss(rng);
            const Sequence noise = make_sequence(nv, kTs);
            Sequence y_noisy = data.y;
            for (std::size_t k = 0; k <= n; ++k) y_noisy[k] += noise[k];
            const DataRecord noisy = make_data_record(data.u, y_noisy, "noisy");

            int tested = 0;
            std::mt19937 phi_rng(50500 + static_cast<unsigned>(level * 1000));
            while (tested < 5) {
                NoiseDecomposition nd;
                try {
                    const DiscreteController c = fopid_discrete(random_phi(phi_rng), {}, kTs, n);
                    nd = noise_bias(noisy, noise, c.impulse, 1.0, w_lin);
                } catch (const Error&) {
                    continue;
                }
                double l1 = 0.0;
                for (std::size_t k = 0; k <= n; ++k) l1 += std::fabs(nd.ell[k] + nd.d[k]);
                worst = std::max(worst, std::fabs(l1 - nd.j_noisy) / std::max(1.0, nd.j_noisy));
                ++tested;
            }
        }
        if (worst > 1e-10) return fail("decomposition identity off by " + fmt(worst));
        return "worst relative defect " + fmt(worst);
    });

    // 6. Band-limited s^0.5 approximation: phase and magnitude slope.
    run_criterion(summary, "fractional differentiator frequency fit", [&] {
        const ContinuousTf g = oustaloup_ct(0.5, OustaloupConfig{5, 1e-6, 1e3});
        double worst_phase = 0.0;
        for (double w = 1e-3; w <= 1.0; w *= std::pow(10.0, 0.1)) {
            const double ph =
                std::arg(evaluate(g, std::complex<double>(0.0, w))) * 180.0 / std::numbers::pi;
            worst_phase = std::max(worst_phase, std::fabs(ph - 45.0));
        }
        auto mag_db = [&](double w) {
            return 20.0 * std::log10(std::abs(evaluate(g, std::complex<double>(0.0, w))));
        };
        const double slope = (mag_db(1.0) - mag_db(1e-3)) / 3.0;
        if (worst_phase > 5.0) return fail("phase deviation " + fmt(worst_phase) + " deg");
        if (std::fabs(slope - 10.0) > 1.0) return fail("slope " + fmt(slope) + " dB/dec");
        std::ostringstream os;
        os.precision(3);
        os << "max |phase-45| = " << worst_phase << " deg, slope = " << slope << " dB/dec";
        return os.str();
    });

    // 7. Saturated time weights.
    run_criterion(summary, "saturated weight properties", [&] {
        const double alpha = 25.0;
        double prev = -1.0;
        for (double tau = 0.0; tau <= 1e6 * alpha; tau = tau == 0.0 ? 1e-4 : tau * 1.7) {
            const double s = saturated_weight(tau, alpha);
            if (!(s < alpha)) return fail("bound violated at tau=" + fmt(tau));
            if (!(s >= prev)) return fail("monotonicity violated at tau=" + fmt(tau));
            if (tau <= 30.0 * alpha && !(s > prev)) {
                return fail("strict growth violated at tau=" + fmt(tau));
            }
            prev = s;
        }
        double worst = 0.0;
        for (double tau = alpha / 1e4; tau <= alpha / 10.0; tau *= 1.3) {
            worst = std::max(worst, std::fabs(saturated_weight(tau, alpha) - tau) / tau);
        }
        if (worst > 0.05) return fail("near-identity defect " + fmt(worst));
        return "bounded, monotone, near-identity defect " + fmt(worst);
    });

    // 8. DC-gain preservation through the bilinear map.
    run_criterion(summary, "bilinear DC-gain preservation", [&] {
        const std::vector<ContinuousTf> suite = {
            make_continuous_tf({1.0}, {1.0, 1.0}),
            make_continuous_tf({9.0}, {1.0, 2.2, 10.2, 9.0}),
            make_continuous_tf({9.0}, {1.0, 1.2, 9.0}),
            make_continuous_tf({2.0, 3.0}, {1.0, 0.7, 2.5}),
            make_continuous_tf({5.0}, {0.2, 1.4, 0.9, 2.0}),
            make_continuous_tf({1.0, 4.0}, {1.0, 3.0, 2.0}),
        };
        double worst = 0.0;
        for (const ContinuousTf& g : suite) {
            const double dc_ct = evaluate(g, 0.0).real();
            const double dc_dt = evaluate(tustin(g, kTs), 1.0).real();
            worst = std::max(worst, std::fabs(dc_dt - dc_ct) / std::max(1.0, std::fabs(dc_ct)));
        }
        if (worst > 1e-10) return fail("DC gain drift " + fmt(worst));
        return "worst drift " + fmt(worst);
    });

    // 9. Benchmark-scale end-to-end run (reduced evaluation budget).
    TuningConfig cfg_full = default_tuning_config();
    cfg_full.pso.max_evaluations = 9000;
    cfg_full.pso.seed = 1;
    TuningOutcome fr_outcome;
    DataRecord data_full = data;  // replaced below
    run_criterion(summary, "benchmark-scale data-driven tuning", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        data_full = collect_closed_loop_data(plant_full, cfg_full.incumbent, cfg_full);
        const std::size_t n = data_full.u.size() - 1;

        const DiscreteController c0 =
            fopid_discrete(cfg_full.incumbent, cfg_full.oustaloup, kTs, n);
        const double j0 = itae_data_driven(data_full, c0.impulse, 1.0, cfg_full.weight);

        fr_outcome = tune_fr(data_full, cfg_full);
        if (fr_outcome.objective_value > j0) {
            return fail("tuned objective " + fmt(fr_outcome.objective_value) +
                        " worse than incumbent " + fmt(j0));
        }

        const Sequence p_imp = plant_full.impulse(kTs, n);
        const DiscreteController c_star =
            fopid_discrete(fr_outcome.phi_star, cfg_full.oustaloup, kTs, n);
        const double realized = itae_simulated(p_imp, c_star.impulse, 1.0, cfg_full.weight);
        const double gap = std::fabs(fr_outcome.objective_value - realized) / std::fabs(realized);
        if (gap > 1e-6) return fail("surrogate/realized gap " + fmt(gap));

        const Metrics m = evaluate_controller(plant_full, fr_outcome.phi_star, cfg_full);
        if (!m.stable) return fail("tuned loop is unstable");
        if (m.steady_state_error > 0.01) {
            return fail("steady-state error " + fmt(m.steady_state_error) + " > 1% of setpoint");
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > 900.0) return fail("took longer than the 15 min budget");
        std::ostringstream os;
        os.precision(4);
        os << "J* = " << fr_outcome.objective_value << " <= J0 = " << j0 << ", gap " << fmt(gap)
           << ", sse " << fmt(m.steady_state_error);
        return os.str();
    });

    // 10. Model-based tuning shows the modeling-error gap on the true plant.
    run_criterion(summary, "reduced-model tuning gap", [&] {
        TuningConfig cfg = cfg_full;  // same budget as the data-driven run
        const TuningOutcome mb = tune_sim(plant_reduced, cfg);
        const Metrics realized = evaluate_controller(plant_full, mb.phi_star, cfg);
        if (!realized.stable) {
            std::ostringstream os;
            os << "model-predicted J = " << fmt(mb.objective_value)
               << ", realized loop unstable (gap demonstrated)";
            return os.str();
        }
        const double gap = std::fabs(mb.objective_value - realized.itae) / realized.itae;
        if (gap <= 1e-6) return fail("no measurable model/plant gap (" + fmt(gap) + ")");
        std::ostringstream os;
        os << "model-predicted J = " << fmt(mb.objective_value) << ", realized = "
           << fmt(realized.itae) << ", relative gap " << fmt(gap);
        return os.str();
    });

    // 11. Optimizer sanity: sphere benchmark and exact reproducibility.
    run_criterion(summary, "optimizer sanity", [&] {
        Bounds box{std::vector<double>(5, -5.0), std::vector<double>(5, 5.0)};
        auto sphere = [](std::span<const double> x) {
            double acc = 0.0;
            for (double v : x) acc += v * v;
            return acc;
        };
        PsoConfig pc;
        pc.seed = 11;
        const PsoResult a = pso_minimize(sphere, box, pc);
        if (a.best_objective > 1e-3) return fail("sphere best " + fmt(a.best_objective));
        if (a.evaluations > 45000) return fail("budget exceeded");
        const PsoResult b = pso_minimize(sphere, box, pc);
        if (a.best_position != b.best_position || a.best_objective != b.best_objective) {
            return fail("same seed produced different results");
        }
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            if (a.trace[i].best_objective != b.trace[i].best_objective) {
                return fail("trace differs between identical runs");
            }
        }
        return "sphere best " + fmt(a.best_objective) + ", reproducible";
    });

    // 12. The data-driven strategy runs one experiment and never touches a
    // plant model.
    run_criterion(summary, "experiment-count invariant", [&] {
        const PlantModel counted = full_plant_preset();
        TuningConfig cfg = default_tuning_config();
        cfg.horizon_seconds = 2.0;
        cfg.pso.population = 10;
        cfg.pso.max_evaluations = 100;
        const DataRecord rec = collect_closed_loop_data(counted, cfg.incumbent, cfg);
        if (counted.invocations() != 1) {
            return fail("data collection used " + std::to_string(counted.invocations()) +
                        " plant invocations");
        }
        (void)tune_fr(rec, cfg);
        if (counted.invocations() != 1) {
            return fail("tuning touched the plant model " +
                        std::to_string(counted.invocations() - 1) + " times");
        }
        return std::string("1 experiment, 0 model evaluations during tuning");
    });

    std::printf("%d/%d criteria passed\n", summary.index - summary.failures, summary.index);
    return summary.failures == 0 ? 0 : 1;
}
