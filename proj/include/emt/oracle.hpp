#pragma once

#include <cstdint>

#include "emt/objectives.hpp"

namespace emt::oracle {

struct OracleResult {
    ThresholdVector best_thresholds;  // lexicographically smallest maximizer
    double best_fitness = 0.0;
    std::uint64_t evaluations = 0;  // exactly C(255, k)
    std::uint64_t optima_count = 0; // threshold vectors attaining the maximum
};

// Ground-truth enumeration of every strictly increasing integer threshold
// vector in [1,255]^k. Capped at k <= 3 (~2.7M evaluations).
// The default entry point partitions the enumeration across OpenMP threads
// by first threshold; the serial variant is the reference the parallel one
// is tested against. Both return identical results.
OracleResult exhaustive_search(ObjectiveKind kind, const ProbDist& dist, int k);
OracleResult exhaustive_search_serial(ObjectiveKind kind, const ProbDist& dist, int k);

}  // namespace emt::oracle
