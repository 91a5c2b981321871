#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

// Box-constrained particle swarm search. The objective must be total over
// the box (return a finite value or a barrier for every in-box point);
// candidates never leave the box (position clamp with velocity zeroing on
// the clamped coordinate). Serial evaluation with a fixed seed is exactly
// reproducible.
namespace fopid {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const { return lower.size(); }
};

struct PsoConfig {
    std::size_t population = 150;
    std::size_t max_evaluations = 45000;
    std::uint64_t seed = 1;
    // Constriction-style defaults.
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    // Candidate positions injected into the initial swarm (clamped to the
    // box); used to seed an incumbent controller.
    std::vector<std::vector<double>> initial_points;
};

struct TracePoint {
    std::size_t evaluations = 0;
    double best_objective = 0.0;
    std::vector<double> best_position;
};

struct PsoResult {
    std::vector<double> best_position;
    double best_objective = 0.0;
    std::size_t evaluations = 0;
    std::vector<TracePoint> trace;  // best_objective is non-increasing
};

using Objective = std::function<double(std::span<const double>)>;

PsoResult pso_minimize(const Objective& objective, const Bounds& bounds, const PsoConfig& cfg);

}  // namespace fopid
