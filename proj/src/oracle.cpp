#include "emt/oracle.hpp"

#include <limits>

#include "emt/errors.hpp"

namespace emt::oracle {

namespace {

// Running maximum with lexicographic tie-breaking. Merging two of these is
// commutative and associative, so the parallel reduction is deterministic.
struct SearchState {
    double best = -std::numeric_limits<double>::infinity();
    int arg[3] = {0, 0, 0};
    std::uint64_t count = 0;
    std::uint64_t evaluations = 0;

    void offer(double fitness, int t1, int t2, int t3) {
        ++evaluations;
        if (fitness > best) {
            best = fitness;
            arg[0] = t1;
            arg[1] = t2;
            arg[2] = t3;
            count = 1;
        } else if (fitness == best) {
            ++count;
            // Keep the lexicographically smallest tie, so the result does not
            // depend on the order slices were handed out.
            const bool smaller = t1 < arg[0] || (t1 == arg[0] && (t2 < arg[1] ||
                                 (t2 == arg[1] && t3 < arg[2])));
            if (smaller) {
                arg[0] = t1;
                arg[1] = t2;
                arg[2] = t3;
            }
        }
    }

    void merge(const SearchState& other) {
        evaluations += other.evaluations;
        if (other.best > best) {
            best = other.best;
            arg[0] = other.arg[0];
            arg[1] = other.arg[1];
            arg[2] = other.arg[2];
            count = other.count;
        } else if (other.best == best && other.count > 0) {
            count += other.count;
            const bool other_smaller =
                other.arg[0] < arg[0] ||
                (other.arg[0] == arg[0] &&
                 (other.arg[1] < arg[1] || (other.arg[1] == arg[1] && other.arg[2] < arg[2])));
            if (other_smaller) {
                arg[0] = other.arg[0];
                arg[1] = other.arg[1];
                arg[2] = other.arg[2];
            }
        }
    }
};

// Enumerates every candidate whose first threshold is t1.
void scan_first(const ObjectiveEvaluator& evaluator, int k, int t1, SearchState& state) {
    int th[3] = {t1, 0, 0};
    if (k == 1) {
        state.offer(evaluator.eval_thresholds({th, 1}), t1, 0, 0);
        return;
    }
    for (int t2 = t1 + 1; t2 <= 255; ++t2) {
        th[1] = t2;
        if (k == 2) {
            state.offer(evaluator.eval_thresholds({th, 2}), t1, t2, 0);
        } else {
            for (int t3 = t2 + 1; t3 <= 255; ++t3) {
                th[2] = t3;
                state.offer(evaluator.eval_thresholds({th, 3}), t1, t2, t3);
            }
        }
    }
}

OracleResult finish(const SearchState& state, int k) {
    OracleResult result;
    result.best_fitness = state.best;
    result.evaluations = state.evaluations;
    result.optima_count = state.count;
    std::vector<int> th(state.arg, state.arg + k);
    result.best_thresholds = ThresholdVector::checked(std::move(th));
    return result;
}

void check_k(int k) {
    if (k < 1 || k > 3)
        throw ValidationError("oracle: exhaustive search supports k in [1, 3], got " +
                              std::to_string(k));
}

}  // namespace

OracleResult exhaustive_search_serial(ObjectiveKind kind, const ProbDist& dist, int k) {
    check_k(k);
    const ObjectiveEvaluator evaluator(kind, dist);
    SearchState state;
    for (int t1 = 1; t1 <= 256 - k; ++t1) scan_first(evaluator, k, t1, state);
    return finish(state, k);
}

OracleResult exhaustive_search(ObjectiveKind kind, const ProbDist& dist, int k) {
    check_k(k);
    const ObjectiveEvaluator evaluator(kind, dist);
    SearchState state;

#pragma omp parallel
    {
        SearchState local;
#pragma omp for schedule(dynamic, 4) nowait
        for (int t1 = 1; t1 <= 256 - k; ++t1) scan_first(evaluator, k, t1, local);
#pragma omp critical(emt_oracle_merge)
        state.merge(local);
    }

    return finish(state, k);
}

}  // namespace emt::oracle
