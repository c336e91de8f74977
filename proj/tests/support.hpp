#pragma once

// Shared test utilities and reference implementations. The reference
// objectives here are deliberate re-implementations as direct per-bin
// summations: they share no code with the production evaluator they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "emt/image.hpp"
#include "emt/objectives.hpp"
#include "emt/rng.hpp"

namespace testsup {

inline emt::ProbDist impulse_dist(std::initializer_list<std::pair<int, double>> masses) {
    emt::ProbDist d;
    for (const auto& [bin, mass] : masses) d.p[static_cast<std::size_t>(bin)] = mass;
    return d;
}

inline emt::ProbDist uniform_dist() {
    emt::ProbDist d;
    d.p.fill(1.0 / 256.0);
    return d;
}

inline emt::ProbDist random_dist(emt::Rng& rng, int occupied_bins = 256) {
    emt::ProbDist d;
    for (int i = 0; i < occupied_bins; ++i) {
        const auto bin = static_cast<std::size_t>(rng.uniform_int(256));
        d.p[bin] += rng.uniform01();
    }
    const double sum = std::accumulate(d.p.begin(), d.p.end(), 0.0);
    for (auto& v : d.p) v /= sum;
    return d;
}

// Class ranges for thresholds th over bins 0..255: class i = [lo_i, hi_i).
inline std::vector<std::pair<int, int>> class_ranges(const std::vector<int>& th) {
    std::vector<std::pair<int, int>> ranges;
    int lo = 0;
    for (int t : th) {
        ranges.emplace_back(lo, t);
        lo = t;
    }
    ranges.emplace_back(lo, 256);
    return ranges;
}

inline double naive_otsu(const emt::ProbDist& d, const std::vector<int>& th) {
    double total_mean = 0.0;
    for (int b = 0; b < 256; ++b) total_mean += b * d.p[b];
    double acc = 0.0;
    for (const auto& [lo, hi] : class_ranges(th)) {
        double w = 0.0, m = 0.0;
        for (int b = lo; b < hi; ++b) {
            w += d.p[b];
            m += b * d.p[b];
        }
        if (w > 0.0) {
            const double mu = m / w;
            acc += w * (mu - total_mean) * (mu - total_mean);
        }
    }
    return acc;
}

inline double naive_kapur(const emt::ProbDist& d, const std::vector<int>& th) {
    double acc = 0.0;
    for (const auto& [lo, hi] : class_ranges(th)) {
        double w = 0.0;
        for (int b = lo; b < hi; ++b) w += d.p[b];
        if (w <= 0.0) continue;
        double h = 0.0;
        for (int b = lo; b < hi; ++b) {
            if (d.p[b] <= 0.0) continue;
            const double q = d.p[b] / w;
            h -= q * std::log(q);
        }
        acc += h;
    }
    return acc;
}

inline double naive_objective(emt::ObjectiveKind kind, const emt::ProbDist& d,
                              const std::vector<int>& th) {
    return kind == emt::ObjectiveKind::Otsu ? naive_otsu(d, th) : naive_kapur(d, th);
}

inline double naive_total_variance(const emt::ProbDist& d) {
    double mean = 0.0;
    for (int b = 0; b < 256; ++b) mean += b * d.p[b];
    double var = 0.0;
    for (int b = 0; b < 256; ++b) var += d.p[b] * (b - mean) * (b - mean);
    return var;
}

struct NaiveBest {
    double fitness = -1.0;
    std::vector<int> thresholds;
};

// Brute-force maximizer over all increasing k-vectors, naive objective,
// lexicographically smallest argmax. Keep k small: this is O(255^k).
inline NaiveBest naive_exhaustive(emt::ObjectiveKind kind, const emt::ProbDist& d, int k) {
    NaiveBest best;
    std::vector<int> th(static_cast<std::size_t>(k));
    const auto recurse = [&](auto&& self, int depth, int start) -> void {
        if (depth == k) {
            const double f = naive_objective(kind, d, th);
            if (f > best.fitness) {
                best.fitness = f;
                best.thresholds = th;
            }
            return;
        }
        for (int t = start; t <= 255; ++t) {
            th[static_cast<std::size_t>(depth)] = t;
            self(self, depth + 1, t + 1);
        }
    };
    recurse(recurse, 0, 1);
    return best;
}

// Two-sided rank-sum p-value by full enumeration of all C(n+m, n) rank
// assignments. Requires a tie-free pooled sample.
inline double enum_ranksum_p(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());

    // Observed U of sample a.
    double rank_sum = 0.0;
    for (double v : a) {
        const auto it = std::lower_bound(pooled.begin(), pooled.end(), v);
        rank_sum += static_cast<double>(it - pooled.begin()) + 1.0;
    }
    const double u_obs = rank_sum - n * (n + 1.0) / 2.0;

    std::vector<bool> mask(static_cast<std::size_t>(n + m), false);
    std::fill(mask.begin(), mask.begin() + n, true);
    std::sort(mask.begin(), mask.end());  // lowest permutation first

    std::uint64_t total = 0, le = 0, ge = 0;
    do {
        double u = 0.0;
        int rank = 1;
        for (bool in_a : mask) {
            if (in_a) u += rank;
            ++rank;
        }
        u -= n * (n + 1.0) / 2.0;
        ++total;
        if (u <= u_obs) ++le;
        if (u >= u_obs) ++ge;
    } while (std::next_permutation(mask.begin(), mask.end()));

    const double tail = static_cast<double>(std::min(le, ge)) / static_cast<double>(total);
    return std::min(1.0, 2.0 * tail);
}

// A canonical channel realizing the distribution: counts by largest
// remainder, pixels laid out in intensity order (histogram metrics do not
// depend on pixel order).
inline emt::RasterImage channel_from_dist(const emt::ProbDist& d, int width, int height) {
    const auto np = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
    std::vector<std::uint64_t> counts(256, 0);
    std::vector<std::pair<double, int>> remainders;
    std::uint64_t assigned = 0;
    for (int b = 0; b < 256; ++b) {
        const double exact = d.p[b] * static_cast<double>(np);
        counts[static_cast<std::size_t>(b)] = static_cast<std::uint64_t>(std::floor(exact));
        assigned += counts[static_cast<std::size_t>(b)];
        remainders.emplace_back(exact - std::floor(exact), b);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& x, const auto& y) {
        return x.first > y.first || (x.first == y.first && x.second < y.second);
    });
    for (std::uint64_t i = 0; assigned < np; ++i, ++assigned)
        ++counts[static_cast<std::size_t>(remainders[i % remainders.size()].second)];

    emt::RasterImage img;
    img.width = width;
    img.height = height;
    img.channels = 1;
    img.samples.reserve(np);
    for (int b = 0; b < 256; ++b)
        img.samples.insert(img.samples.end(), counts[static_cast<std::size_t>(b)],
                           static_cast<std::uint8_t>(b));
    return img;
}

inline std::string data_path(const std::string& name) {
    return std::string(EMT_DATA_DIR) + "/" + name;
}

// Scratch directory for files tests write; wiped lazily per name.
inline std::string temp_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "emthresh_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace testsup
