// Timing harness comparing the serial reference kernels against their
// OpenMP counterparts: exhaustive threshold search and seeded run campaigns.

#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "emt/emo.hpp"
#include "emt/objectives.hpp"
#include "emt/oracle.hpp"

namespace {

double now_seconds() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

emt::ProbDist mixture_dist() {
    emt::ProbDist d;
    const double mu[3] = {55.0, 130.0, 205.0};
    const double sigma[3] = {11.0, 16.0, 12.0};
    const double w[3] = {0.4, 0.35, 0.25};
    double sum = 0.0;
    for (int b = 0; b < 256; ++b) {
        double v = 0.0;
        for (int c = 0; c < 3; ++c) {
            const double z = (b - mu[c]) / sigma[c];
            v += w[c] * std::exp(-0.5 * z * z);
        }
        d.p[b] = v;
        sum += v;
    }
    for (auto& v : d.p) v /= sum;
    return d;
}

void bench_oracle(const emt::ProbDist& dist) {
    std::printf("exhaustive search (best fitness must match bit for bit)\n");
    std::printf("%-28s %10s %10s %8s\n", "configuration", "serial[s]", "openmp[s]", "speedup");
    for (emt::ObjectiveKind kind : {emt::ObjectiveKind::Otsu, emt::ObjectiveKind::Kapur}) {
        for (int k = 2; k <= 3; ++k) {
            double t0 = now_seconds();
            const auto serial = emt::oracle::exhaustive_search_serial(kind, dist, k);
            double t1 = now_seconds();
            const auto parallel = emt::oracle::exhaustive_search(kind, dist, k);
            double t2 = now_seconds();
            const bool same = serial.best_fitness == parallel.best_fitness &&
                              serial.best_thresholds.values == parallel.best_thresholds.values &&
                              serial.optima_count == parallel.optima_count;
            std::printf("%-6s k=%d %-15s %10.3f %10.3f %7.2fx\n",
                        emt::objective_name(kind).c_str(), k, same ? "" : "MISMATCH!",
                        t1 - t0, t2 - t1, (t1 - t0) / (t2 - t1));
        }
    }
}

void bench_campaign(const emt::ProbDist& dist) {
    const emt::emo::EmoParams params;
    const int runs = 35;
    const int k = 3;

    std::vector<double> fitness(runs);
    double t0 = now_seconds();
    for (int r = 0; r < runs; ++r)
        fitness[r] =
            emt::emo::optimize(emt::ObjectiveKind::Otsu, dist, k, params, 1 + r).best_fitness;
    double t1 = now_seconds();

    std::vector<double> fitness_par(runs);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < runs; ++r)
        fitness_par[r] =
            emt::emo::optimize(emt::ObjectiveKind::Otsu, dist, k, params, 1 + r).best_fitness;
    double t2 = now_seconds();

    std::printf("\ncampaign of %d seeded runs, otsu k=%d\n", runs, k);
    std::printf("serial  %.3f s\nopenmp  %.3f s  (%.2fx)\n", t1 - t0, t2 - t1,
                (t1 - t0) / (t2 - t1));
    std::printf("per-run results identical: %s\n", fitness == fitness_par ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("built without openmp; both columns run serially\n\n");
#endif
    const emt::ProbDist dist = mixture_dist();
    bench_oracle(dist);
    bench_campaign(dist);
    return 0;
}
