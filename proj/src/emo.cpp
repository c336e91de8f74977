#include "emt/emo.hpp"

#include <algorithm>
#include <cmath>

#include "emt/errors.hpp"

namespace emt::emo {

namespace {
constexpr double kDegenerate = 1e-12;
}

std::string stop_reason_name(StopReason reason) {
    return reason == StopReason::Stall ? "stall" : "iter_max";
}

void EmoParams::validate() const {
    if (iter_max < 1) throw ValidationError("emo: iter_max must be >= 1");
    if (iter_local < 0) throw ValidationError("emo: iter_local must be >= 0");
    if (pop_size < 2) throw ValidationError("emo: pop_size must be >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("emo: delta must be in (0, 1)");
    if (!(stall_fraction > 0.0 && stall_fraction <= 1.0))
        throw ValidationError("emo: stall_fraction must be in (0, 1]");
    if (!(lower < upper)) throw ValidationError("emo: lower bound must be below upper bound");
}

int EmoParams::stall_window() const {
    return static_cast<int>(std::ceil(stall_fraction * static_cast<double>(iter_max)));
}

void Population::refresh_best() {
    std::size_t best = 0;
    for (std::size_t i = 1; i < particles.size(); ++i)
        if (particles[i].fitness > particles[best].fitness) best = i;
    best_index = best;
}

Population initialize(const EmoParams& params, int k, Rng& rng, const ObjectiveFn& objective) {
    params.validate();
    if (k < 1) throw ValidationError("emo: dimension must be >= 1");

    Population pop;
    pop.particles.resize(static_cast<std::size_t>(params.pop_size));
    for (auto& particle : pop.particles) {
        particle.position.resize(static_cast<std::size_t>(k));
        for (auto& x : particle.position) x = rng.uniform(params.lower, params.upper);
        particle.fitness = objective(particle.position);
    }
    pop.refresh_best();
    pop.iteration = 0;
    return pop;
}

Population initialize(const EmoParams& params, int k, std::uint64_t seed,
                      const ObjectiveFn& objective) {
    Rng rng(seed);
    return initialize(params, k, rng, objective);
}

std::vector<double> compute_charges(const Population& pop) {
    const std::size_t n = pop.particles.size();
    std::vector<double> charges(n, 1.0);
    const double best_fitness = pop.best().fitness;
    double denom = 0.0;
    for (const auto& particle : pop.particles) denom += particle.fitness - best_fitness;
    if (std::fabs(denom) < kDegenerate) return charges;  // all fitness equal

    const auto dim = static_cast<double>(pop.particles.front().position.size());
    for (std::size_t i = 0; i < n; ++i)
        charges[i] = std::exp(-dim * (pop.particles[i].fitness - best_fitness) / denom);
    return charges;
}

std::vector<std::vector<double>> compute_forces(const Population& pop,
                                                const std::vector<double>& charges) {
    const std::size_t n = pop.particles.size();
    const std::size_t k = pop.particles.front().position.size();
    std::vector<std::vector<double>> forces(n, std::vector<double>(k, 0.0));

    for (std::size_t i = 0; i < n; ++i) {
        const auto& xi = pop.particles[i].position;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto& xj = pop.particles[j].position;
            double dist2 = 0.0;
            for (std::size_t d = 0; d < k; ++d) {
                const double diff = xj[d] - xi[d];
                dist2 += diff * diff;
            }
            if (std::sqrt(dist2) < kDegenerate) continue;  // coincident pair
            const double scale = charges[i] * charges[j] / dist2;
            // Better particles attract; worse-or-equal ones repel.
            const double sign = pop.particles[j].fitness > pop.particles[i].fitness ? 1.0 : -1.0;
            for (std::size_t d = 0; d < k; ++d)
                forces[i][d] += sign * (xj[d] - xi[d]) * scale;
        }
    }
    return forces;
}

void move_population(Population& pop, const std::vector<std::vector<double>>& forces, Rng& rng,
                     const EmoParams& params, const ObjectiveFn& objective) {
    for (std::size_t i = 0; i < pop.particles.size(); ++i) {
        if (i == pop.best_index) continue;

        double norm2 = 0.0;
        for (double f : forces[i]) norm2 += f * f;
        const double norm = std::sqrt(norm2);
        if (norm < kDegenerate) continue;  // no net force, no draws

        auto& particle = pop.particles[i];
        for (std::size_t d = 0; d < particle.position.size(); ++d) {
            const double lambda = rng.uniform01();
            const double f = forces[i][d];
            // Feasible headroom toward the bound the force points at.
            const double range = f > 0.0   ? params.upper - particle.position[d]
                                 : f < 0.0 ? particle.position[d] - params.lower
                                           : 0.0;
            particle.position[d] += lambda * (f / norm) * range;
            particle.position[d] = std::clamp(particle.position[d], params.lower, params.upper);
        }
        particle.fitness = objective(particle.position);
    }
}

Particle local_search(const Particle& point, const EmoParams& params, Rng& rng,
                      const ObjectiveFn& objective) {
    Particle current = point;
    const double length = params.delta * (params.upper - params.lower);

    for (std::size_t d = 0; d < current.position.size(); ++d) {
        for (int trial = 0; trial < params.iter_local; ++trial) {
            const double lambda = rng.uniform01();
            const bool upward = rng.uniform01() < 0.5;

            Particle candidate = current;
            candidate.position[d] += upward ? lambda * length : -lambda * length;
            candidate.position[d] = std::clamp(candidate.position[d], params.lower, params.upper);
            candidate.fitness = objective(candidate.position);
            if (candidate.fitness > current.fitness) {
                current = std::move(candidate);
                break;  // first improvement; continue with the next dimension
            }
        }
    }
    return current;
}

const Particle& select_next(const Particle& y, const Particle& z) {
    return z.fitness > y.fitness ? z : y;
}

OptResult optimize(ObjectiveKind kind, const ProbDist& dist, int k, const EmoParams& params,
                   std::uint64_t seed) {
    const ObjectiveEvaluator evaluator(kind, dist);
    const ObjectiveFn objective = [&evaluator](std::span<const double> x) {
        return evaluator.eval_position(x);
    };

    Rng rng(seed);
    Population pop = initialize(params, k, rng, objective);

    OptResult result;
    result.history.reserve(static_cast<std::size_t>(params.iter_max) + 1);
    result.history.push_back(pop.best().fitness);

    const int window = params.stall_window();
    double stall_ref = pop.best().fitness;
    int stall_count = 0;
    int t = 0;
    StopReason reason = StopReason::IterMax;

    while (t < params.iter_max) {
        const auto charges = compute_charges(pop);
        const auto forces = compute_forces(pop, charges);
        move_population(pop, forces, rng, params, objective);
        for (auto& particle : pop.particles) {
            Particle refined = local_search(particle, params, rng, objective);
            particle = select_next(particle, refined);
        }
        pop.refresh_best();
        pop.iteration = ++t;

        const double best = pop.best().fitness;
        result.history.push_back(best);
        if (best - stall_ref <= kDegenerate) {
            if (++stall_count >= window) {
                reason = StopReason::Stall;
                break;
            }
        } else {
            stall_count = 0;
            stall_ref = best;
        }
    }

    result.best_position = pop.best().position;
    result.best_thresholds = repair_position(result.best_position);
    result.best_fitness = pop.best().fitness;
    result.iterations_run = t;
    result.stop_reason = reason;
    return result;
}

}  // namespace emt::emo
