#include "fopid/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace fopid {

namespace {

void validate(const Bounds& bounds, const PsoConfig& cfg) {
    if (bounds.lower.empty()) throw std::invalid_argument("pso: bounds are empty");
    if (bounds.lower.size() != bounds.upper.size()) {
        throw std::invalid_argument("pso: bounds dimension mismatch");
    }
    for (std::size_t i = 0; i < bounds.lower.size(); ++i) {
        if (!(bounds.lower[i] <= bounds.upper[i])) {
            throw std::invalid_argument("pso: lower bound exceeds upper bound");
        }
    }
    if (cfg.population < 2) throw std::invalid_argument("pso: population must be >= 2");
    if (cfg.max_evaluations < cfg.population) {
        throw std::invalid_argument("pso: max_evaluations must cover one evaluation round");
    }
    for (const auto& p : cfg.initial_points) {
        if (p.size() != bounds.lower.size()) {
            throw std::invalid_argument("pso: initial point dimension mismatch");
        }
    }
}

// NaN-proof ordering: a NaN objective never wins.
bool improves(double candidate, double incumbent) {
    return std::isfinite(candidate) ? candidate < incumbent || std::isnan(incumbent)
                                    : false;
}

}  // namespace

PsoResult pso_minimize(const Objective& objective, const Bounds& bounds, const PsoConfig& cfg) {
    validate(bounds, cfg);
    const std::size_t dim = bounds.dimension();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto clamp_point = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < dim; ++i) x[i] = std::clamp(x[i], bounds.lower[i], bounds.upper[i]);
    };

    PsoResult result;
    result.best_objective = std::numeric_limits<double>::infinity();

    // Degenerate box: a single admissible point, one evaluation suffices.
    bool single_point = true;
    for (std::size_t i = 0; i < dim; ++i) single_point &= bounds.lower[i] == bounds.upper[i];
    if (single_point) {
        result.best_position = bounds.lower;
        result.best_objective = objective(result.best_position);
        result.evaluations = 1;
        result.trace.push_back({1, result.best_objective, result.best_position});
        return result;
    }

    const std::size_t pop = cfg.population;
    std::vector<std::vector<double>> pos(pop, std::vector<double>(dim));
    std::vector<std::vector<double>> vel(pop, std::vector<double>(dim, 0.0));
    std::vector<std::vector<double>> pbest_pos(pop);
    std::vector<double> pbest_f(pop, std::numeric_limits<double>::infinity());

    for (std::size_t p = 0; p < pop; ++p) {
        if (p < cfg.initial_points.size()) {
            pos[p] = cfg.initial_points[p];
            clamp_point(pos[p]);
        } else {
            for (std::size_t i = 0; i < dim; ++i) {
                pos[p][i] = bounds.lower[i] + unit(rng) * (bounds.upper[i] - bounds.lower[i]);
            }
        }
    }

    std::size_t evals = 0;
    auto evaluate_swarm = [&]() {
        for (std::size_t p = 0; p < pop; ++p) {
            const double f = objective(pos[p]);
            ++evals;
            if (pbest_pos[p].empty() || improves(f, pbest_f[p])) {
                pbest_f[p] = f;
                pbest_pos[p] = pos[p];
            }
            if (improves(f, result.best_objective)) {
                result.best_objective = f;
                result.best_position = pos[p];
            }
        }
    };

    evaluate_swarm();
    if (result.best_position.empty()) {
        // every initial objective was non-finite; report the first particle
        result.best_position = pos[0];
        result.best_objective = std::numeric_limits<double>::quiet_NaN();
    }
    result.trace.push_back({evals, result.best_objective, result.best_position});

    while (evals + pop <= cfg.max_evaluations) {
        for (std::size_t p = 0; p < pop; ++p) {
            const auto& pb = pbest_pos[p];
            for (std::size_t i = 0; i < dim; ++i) {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                vel[p][i] = cfg.inertia * vel[p][i] + cfg.cognitive * r1 * (pb[i] - pos[p][i]) +
                            cfg.social * r2 * (result.best_position[i] - pos[p][i]);
                pos[p][i] += vel[p][i];
                if (pos[p][i] < bounds.lower[i]) {
                    pos[p][i] = bounds.lower[i];
                    vel[p][i] = 0.0;
                } else if (pos[p][i] > bounds.upper[i]) {
                    pos[p][i] = bounds.upper[i];
                    vel[p][i] = 0.0;
                }
            }
        }
        evaluate_swarm();
        result.trace.push_back({evals, result.best_objective, result.best_position});
    }

    result.evaluations = evals;
    return result;
}

}  // namespace fopid
