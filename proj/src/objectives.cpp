#include "emt/objectives.hpp"

#include <algorithm>
#include <cmath>

#include "emt/errors.hpp"

namespace emt {

std::string objective_name(ObjectiveKind kind) {
    return kind == ObjectiveKind::Otsu ? "otsu" : "kapur";
}

ObjectiveKind parse_objective(const std::string& name) {
    if (name == "otsu") return ObjectiveKind::Otsu;
    if (name == "kapur") return ObjectiveKind::Kapur;
    throw ValidationError("unknown objective '" + name + "' (expected otsu or kapur)");
}

ThresholdVector ThresholdVector::checked(std::vector<int> values) {
    if (values.empty()) throw ValidationError("thresholds: need at least one value");
    int prev = 0;
    for (int v : values) {
        if (v < 1 || v > 255)
            throw ValidationError("thresholds: value " + std::to_string(v) + " outside [1, 255]");
        if (v <= prev) throw ValidationError("thresholds: values must be strictly increasing");
        prev = v;
    }
    return ThresholdVector{std::move(values)};
}

ThresholdVector repair_position(std::span<const double> position) {
    const int k = static_cast<int>(position.size());
    if (k < 1) throw ValidationError("repair: empty position");
    if (k > 254) throw ValidationError("repair: no valid distinct thresholds for k > 254");

    std::vector<int> rounded(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        rounded[i] = std::clamp(static_cast<int>(std::lround(position[i])), 1, 255);
    std::sort(rounded.begin(), rounded.end());

    std::array<bool, 256> used{};
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int v : rounded) {
        int pick = -1;
        if (!used[v]) {
            pick = v;
        } else {
            for (int c = v + 1; c <= 255 && pick < 0; ++c)
                if (!used[c]) pick = c;
            for (int c = v - 1; c >= 1 && pick < 0; --c)
                if (!used[c]) pick = c;
        }
        used[pick] = true;
        out.push_back(pick);
    }
    // Downward nudges can break ordering.
    std::sort(out.begin(), out.end());
    return ThresholdVector{std::move(out)};
}

ObjectiveEvaluator::ObjectiveEvaluator(ObjectiveKind kind, const ProbDist& dist)
    : kind_(kind), p_(dist.p) {
    for (int b = 0; b < 256; ++b) {
        const double p = dist.p[b];
        cum_mass_[b + 1] = cum_mass_[b] + p;
        cum_mass_level_[b + 1] = cum_mass_level_[b] + static_cast<double>(b) * p;
        cum_plogp_[b + 1] = cum_plogp_[b] + (p > 0.0 ? p * std::log(p) : 0.0);
    }
}

ObjectiveEvaluator::ClassSums ObjectiveEvaluator::class_sums(int lo, int hi) const {
    ClassSums sums;
    sums.mass = cum_mass_[hi] - cum_mass_[lo];
    if (sums.mass >= kTinyClassMass) {
        sums.first_moment = cum_mass_level_[hi] - cum_mass_level_[lo];
        sums.plogp = cum_plogp_[hi] - cum_plogp_[lo];
        return sums;
    }
    sums.mass = 0.0;
    for (int b = lo; b < hi; ++b) {
        const double p = p_[static_cast<std::size_t>(b)];
        if (p <= 0.0) continue;
        sums.mass += p;
        sums.first_moment += static_cast<double>(b) * p;
        sums.plogp += p * std::log(p);
    }
    return sums;
}

double ObjectiveEvaluator::eval_thresholds(std::span<const int> thresholds) const {
    const int k = static_cast<int>(thresholds.size());
    const double mu_total = total_mean();
    double acc = 0.0;
    int lo = 0;
    for (int i = 0; i <= k; ++i) {
        const int hi = (i == k) ? 256 : thresholds[static_cast<std::size_t>(i)];
        const ClassSums sums = class_sums(lo, hi);
        if (sums.mass > 0.0) {
            if (kind_ == ObjectiveKind::Otsu) {
                const double mu = sums.first_moment / sums.mass;
                const double d = mu - mu_total;
                acc += sums.mass * d * d;
            } else {
                // H = ln w - (sum p ln p)/w; clamped at 0 so a pure class is
                // exactly zero even when the division rounds.
                const double h = std::log(sums.mass) - sums.plogp / sums.mass;
                acc += std::max(0.0, h);
            }
        }
        lo = hi;
    }
    return acc;
}

double ObjectiveEvaluator::eval_position(std::span<const double> position) const {
    const ThresholdVector th = repair_position(position);
    return eval_thresholds(th.values);
}

ClassDecomposition class_decomposition(const ProbDist& dist, const ThresholdVector& th) {
    const ObjectiveEvaluator tables(ObjectiveKind::Otsu, dist);
    const int k = th.k();
    ClassDecomposition dec;
    dec.weights.resize(static_cast<std::size_t>(k) + 1);
    dec.means.resize(static_cast<std::size_t>(k) + 1);
    dec.total_mean = tables.total_mean();
    int lo = 0;
    for (int i = 0; i <= k; ++i) {
        const int hi = (i == k) ? 256 : th.values[static_cast<std::size_t>(i)];
        const auto sums = tables.class_sums(lo, hi);
        dec.weights[static_cast<std::size_t>(i)] = sums.mass;
        dec.means[static_cast<std::size_t>(i)] =
            sums.mass > 0.0 ? sums.first_moment / sums.mass : 0.0;
        lo = hi;
    }
    return dec;
}

double otsu_objective(const ProbDist& dist, const ThresholdVector& th) {
    return ObjectiveEvaluator(ObjectiveKind::Otsu, dist).eval_thresholds(th.values);
}

double kapur_objective(const ProbDist& dist, const ThresholdVector& th) {
    return ObjectiveEvaluator(ObjectiveKind::Kapur, dist).eval_thresholds(th.values);
}

double evaluate(ObjectiveKind kind, const ProbDist& dist, std::span<const double> position) {
    return ObjectiveEvaluator(kind, dist).eval_position(position);
}

}  // namespace emt
