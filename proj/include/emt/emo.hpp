#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "emt/objectives.hpp"
#include "emt/rng.hpp"

namespace emt::emo {

enum class StopReason { Stall, IterMax };

std::string stop_reason_name(StopReason reason);

// Optimizer parameters. The defaults are the standard configuration for up
// to five dimensions; every coordinate shares one [lower, upper] interval.
struct EmoParams {
    int iter_max = 150;
    int iter_local = 10;
    double delta = 0.025;
    int pop_size = 50;
    double stall_fraction = 0.1;
    double lower = 0.0;
    double upper = 255.0;

    void validate() const;
    int stall_window() const;  // ceil(stall_fraction * iter_max)
};

struct Particle {
    std::vector<double> position;
    double fitness = 0.0;
};

struct Population {
    std::vector<Particle> particles;
    std::size_t best_index = 0;
    int iteration = 0;

    const Particle& best() const { return particles[best_index]; }
    void refresh_best();  // argmax of fitness, lowest index wins ties
};

struct OptResult {
    std::vector<double> best_position;
    ThresholdVector best_thresholds;
    double best_fitness = 0.0;
    int iterations_run = 0;
    StopReason stop_reason = StopReason::IterMax;
    std::vector<double> history;  // best fitness after init, then per iteration
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

// Population of pop_size particles sampled coordinate-wise uniform in bounds.
Population initialize(const EmoParams& params, int k, Rng& rng, const ObjectiveFn& objective);
Population initialize(const EmoParams& params, int k, std::uint64_t seed,
                      const ObjectiveFn& objective);

// q_i = exp(-n (f_i - f_best) / sum_j (f_j - f_best)); all ones when the
// denominator is degenerate. The best particle always carries charge 1.
std::vector<double> compute_charges(const Population& pop);

// Pairwise attraction toward better particles, repulsion from worse-or-equal
// ones, scaled by q_i q_j / ||x_j - x_i||^2. Coincident pairs are skipped.
std::vector<std::vector<double>> compute_forces(const Population& pop,
                                                const std::vector<double>& charges);

// Moves every particle except the best along its normalized total force, one
// uniform draw per coordinate, never leaving the bounds; refreshes fitness.
void move_population(Population& pop, const std::vector<std::vector<double>>& forces, Rng& rng,
                     const EmoParams& params, const ObjectiveFn& objective);

// Coordinate-wise random perturbations within a delta-fraction of the range;
// the first strict improvement per dimension is kept. Never worsens fitness.
Particle local_search(const Particle& point, const EmoParams& params, Rng& rng,
                      const ObjectiveFn& objective);

// Keeps the particle with the larger fitness; ties keep y.
const Particle& select_next(const Particle& y, const Particle& z);

// Full optimization loop: charges -> forces -> move -> local search ->
// selection, until the best fitness stalls for stall_window() consecutive
// iterations or iter_max is reached. Deterministic under the seed.
OptResult optimize(ObjectiveKind kind, const ProbDist& dist, int k, const EmoParams& params,
                   std::uint64_t seed);

}  // namespace emt::emo
