#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emt::stats {

double mean(std::span<const double> sample);

// Population standard deviation: sqrt(sum (v - mean)^2 / n).
double run_std(std::span<const double> sample);

struct WilcoxonResult {
    double p_value = 1.0;
    double u_statistic = 0.0;  // U of the first sample, midranks for ties
    bool exact = false;
};

// Two-sided Mann-Whitney/rank-sum test. Uses the exact null distribution of
// U (dynamic program over rank assignments) when min(|a|,|b|) <= 10 and the
// pooled sample is tie-free; otherwise a normal approximation with tie,
// continuity and Edgeworth kurtosis corrections.
WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

// Both paths individually, for cross-checking. The exact path requires a
// tie-free pooled sample.
double rank_sum_p_exact(std::span<const double> a, std::span<const double> b);
double rank_sum_p_normal(std::span<const double> a, std::span<const double> b);

// One optimizer run of a campaign. An empty `psnr` records the
// identical-image (infinite PSNR) case. `history` is the per-iteration best
// fitness, kept so convergence can be plotted externally.
struct RunRecord {
    int k = 0;
    int channel = 0;
    std::uint64_t seed = 0;
    std::vector<int> thresholds;
    double fitness = 0.0;
    int iterations = 0;
    std::string stop_reason;
    std::optional<double> psnr;
    std::vector<double> history;
};

struct RunAggregate {
    double fitness_mean = 0.0;
    double fitness_std = 0.0;
    std::optional<double> psnr_mean;  // over runs with finite PSNR
    std::optional<double> psnr_std;
    int psnr_infinite_runs = 0;
    double iterations_mean = 0.0;
    double iterations_median = 0.0;
    std::vector<int> best_thresholds;  // highest fitness, ties -> lowest seed
    std::uint64_t best_seed = 0;
    double best_fitness = 0.0;
};

// Aggregates one homogeneous configuration (same k and channel); mixing
// configurations is an error.
RunAggregate aggregate_runs(std::span<const RunRecord> runs);

}  // namespace emt::stats
