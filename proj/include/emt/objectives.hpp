#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "emt/image.hpp"

namespace emt {

enum class ObjectiveKind { Otsu, Kapur };

std::string objective_name(ObjectiveKind kind);
ObjectiveKind parse_objective(const std::string& name);

// k strictly increasing integer thresholds, each in [1, 255]. A threshold t
// splits classes so that a pixel equal to t falls in the class above it.
struct ThresholdVector {
    std::vector<int> values;

    int k() const { return static_cast<int>(values.size()); }
    static ThresholdVector checked(std::vector<int> values);
};

// Per-class probability mass and mean levels for a given threshold vector.
// Empty classes carry weight 0 and mean 0.
struct ClassDecomposition {
    std::vector<double> weights;  // k+1
    std::vector<double> means;    // k+1
    double total_mean = 0.0;
};

// Deterministic binding from the optimizer's real-valued box to the integer
// threshold domain: round to nearest, clamp to [1,255], sort, then resolve
// duplicates by nudging each one up to the next free integer (down if none).
ThresholdVector repair_position(std::span<const double> position);

// Cumulative tables over a ProbDist, making each class sum O(1). Every
// objective evaluation in the project routes through these tables so that
// equal thresholds always yield bit-identical fitness, whichever caller
// (optimizer, oracle, or the public functions below) asked.
class ObjectiveEvaluator {
public:
    ObjectiveEvaluator(ObjectiveKind kind, const ProbDist& dist);

    // Thresholds must be strictly increasing integers in [1, 255].
    double eval_thresholds(std::span<const int> thresholds) const;

    // Repairs a real-valued position, then evaluates it.
    double eval_position(std::span<const double> position) const;

    ObjectiveKind kind() const { return kind_; }
    double total_mean() const { return cum_mass_level_[256]; }

    struct ClassSums {
        double mass = 0.0;
        double first_moment = 0.0;  // sum of bin * p
        double plogp = 0.0;         // sum of p ln p
    };

    // Sums over bins [lo, hi). Uses the cumulative tables, except that a
    // class whose prefix-difference mass falls below kTinyClassMass is
    // re-summed bin by bin: differences of near-equal prefix sums are
    // cancellation noise there, and noise/noise ratios can fabricate class
    // means and entropies out of thin air.
    ClassSums class_sums(int lo, int hi) const;

private:
    static constexpr double kTinyClassMass = 1e-6;

    ObjectiveKind kind_;
    std::array<double, 256> p_{};
    std::array<double, 257> cum_mass_{};        // sum of p
    std::array<double, 257> cum_mass_level_{};  // sum of bin * p
    std::array<double, 257> cum_plogp_{};       // sum of p ln p (0 where p = 0)
};

ClassDecomposition class_decomposition(const ProbDist& dist, const ThresholdVector& th);

// Between-class variance on the 0..255 level scale.
double otsu_objective(const ProbDist& dist, const ThresholdVector& th);

// Sum of within-class Shannon entropies (natural log).
double kapur_objective(const ProbDist& dist, const ThresholdVector& th);

// Repairs the position and evaluates the selected objective.
double evaluate(ObjectiveKind kind, const ProbDist& dist, std::span<const double> position);

}  // namespace emt
