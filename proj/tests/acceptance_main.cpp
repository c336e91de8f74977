// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// criterion fails. Expects the committed histogram suite under data/suite;
// the benchmark-image reproduction checks are skipped (not failed) when the
// optional images are absent.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "emt/emo.hpp"
#include "emt/image.hpp"
#include "emt/objectives.hpp"
#include "emt/oracle.hpp"
#include "emt/report.hpp"
#include "emt/segmentation.hpp"
#include "emt/stats.hpp"
#include "support.hpp"

using namespace emt;

namespace {

const std::vector<std::string> kSuite = {
    "impulse2", "impulse3", "quad_a", "quad_b", "quad_c",
    "quad_d",   "quad_e",   "quad_f", "quad_g", "quad_h",
};

constexpr int kRuns = 35;
constexpr std::uint64_t kBaseSeed = 1;

struct ConfigStats {
    double oracle_best = 0.0;
    int exact_hits = 0;
    double worst_ratio = 1.0;
    double median_iterations = 0.0;
    bool histories_monotone = true;
};

struct SuiteData {
    std::string name;
    ProbDist dist;
    // objective -> k -> per-config data
    std::map<ObjectiveKind, std::map<int, ConfigStats>> configs;
    std::map<ObjectiveKind, std::array<double, 3>> oracle_by_k;  // k = 1..3
    // otsu mean PSNR by k over finite runs; -1 marks "all runs infinite"
    std::map<int, double> otsu_mean_psnr;
};

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s - criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str());
    if (!pass) ++failures;
}

void report_skip(int id, const char* name, const std::string& why) {
    std::printf("SKIP - criterion %d: %s (%s)\n", id, name, why.c_str());
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

SuiteData evaluate_suite_entry(const std::string& name) {
    SuiteData data;
    data.name = name;
    data.dist = load_histogram_file(testsup::data_path("suite/" + name + ".json"));

    const emo::EmoParams params;  // the standard defaults under test
    for (const auto kind : {ObjectiveKind::Otsu, ObjectiveKind::Kapur}) {
        for (int k = 1; k <= 3; ++k)
            data.oracle_by_k[kind][static_cast<std::size_t>(k) - 1] =
                oracle::exhaustive_search(kind, data.dist, k).best_fitness;

        for (int k = 2; k <= 5; ++k) {
            std::vector<emo::OptResult> results(kRuns);
#pragma omp parallel for schedule(dynamic)
            for (int r = 0; r < kRuns; ++r)
                results[static_cast<std::size_t>(r)] =
                    emo::optimize(kind, data.dist, k, params, kBaseSeed + r);

            ConfigStats stats;
            std::vector<double> iterations;
            std::vector<double> psnrs;
            bool all_infinite = true;
            for (const auto& res : results) {
                iterations.push_back(static_cast<double>(res.iterations_run));
                for (std::size_t i = 1; i < res.history.size(); ++i)
                    if (res.history[i] < res.history[i - 1]) stats.histories_monotone = false;
                if (kind == ObjectiveKind::Otsu) {
                    const auto psnr = psnr_from_rmse(rmse_from_dist(data.dist, res.best_thresholds));
                    if (psnr.has_value()) {
                        psnrs.push_back(*psnr);
                        all_infinite = false;
                    }
                }
            }
            stats.median_iterations = median_of(iterations);
            if (k <= 3) {
                const double oracle_best = data.oracle_by_k[kind][static_cast<std::size_t>(k) - 1];
                stats.oracle_best = oracle_best;
                for (const auto& res : results) {
                    if (res.best_fitness == oracle_best) ++stats.exact_hits;
                    if (oracle_best > 0.0)
                        stats.worst_ratio =
                            std::min(stats.worst_ratio, res.best_fitness / oracle_best);
                }
            }
            data.configs[kind][k] = stats;
            if (kind == ObjectiveKind::Otsu)
                data.otsu_mean_psnr[k] =
                    all_infinite ? -1.0
                                 : std::accumulate(psnrs.begin(), psnrs.end(), 0.0) /
                                       static_cast<double>(psnrs.size());
        }
    }
    return data;
}

void criterion_1_and_3_and_4(const std::vector<SuiteData>& suite, double elapsed_seconds) {
    int weak_configs = 0;
    std::string worst_note = "all configs 35/35";
    double global_worst_ratio = 1.0;
    for (const auto& entry : suite) {
        for (const auto kind : {ObjectiveKind::Otsu, ObjectiveKind::Kapur}) {
            for (int k = 2; k <= 3; ++k) {
                const auto& cfg = entry.configs.at(kind).at(k);
                if (cfg.exact_hits < 33) {
                    ++weak_configs;
                    worst_note = entry.name + "/" + objective_name(kind) + "/k=" +
                                 std::to_string(k) + " hit " + std::to_string(cfg.exact_hits) +
                                 "/35";
                }
                global_worst_ratio = std::min(global_worst_ratio, cfg.worst_ratio);
            }
        }
    }
    char detail[256];
    std::snprintf(detail, sizeof(detail),
                  "%d/40 configs at >=33/35 exact optimum, worst fitness ratio %.6f, %s, %.1fs",
                  40 - weak_configs, global_worst_ratio, worst_note.c_str(), elapsed_seconds);
    report(1, "oracle equivalence on the synthetic suite",
           weak_configs == 0 && global_worst_ratio >= 0.999, detail);

    bool oracle_monotone = true;
    bool histories_monotone = true;
    std::string mono_note = "all monotone";
    for (const auto& entry : suite) {
        for (const auto kind : {ObjectiveKind::Otsu, ObjectiveKind::Kapur}) {
            const auto& by_k = entry.oracle_by_k.at(kind);
            if (!(by_k[0] <= by_k[1] && by_k[1] <= by_k[2])) {
                oracle_monotone = false;
                mono_note = entry.name + "/" + objective_name(kind);
            }
            for (int k = 2; k <= 5; ++k)
                if (!entry.configs.at(kind).at(k).histories_monotone) {
                    histories_monotone = false;
                    mono_note = entry.name + " history";
                }
        }
    }
    report(3, "optimum monotone in k and run histories non-decreasing",
           oracle_monotone && histories_monotone, mono_note);

    double worst_median = 0.0;
    std::string med_note;
    for (const auto& entry : suite)
        for (const auto kind : {ObjectiveKind::Otsu, ObjectiveKind::Kapur})
            for (int k = 2; k <= 5; ++k) {
                const double med = entry.configs.at(kind).at(k).median_iterations;
                if (med > worst_median) {
                    worst_median = med;
                    med_note = entry.name + "/" + objective_name(kind) + "/k=" +
                               std::to_string(k);
                }
            }
    char med_detail[160];
    std::snprintf(med_detail, sizeof(med_detail), "worst median %.1f iterations at %s (limit 60)",
                  worst_median, med_note.c_str());
    report(4, "iteration economy under the default parameters", worst_median <= 60.0,
           med_detail);
}

void criterion_2() {
    const ProbDist two = testsup::impulse_dist({{50, 0.5}, {200, 0.5}});
    const emo::EmoParams params;
    int exact = 0;
    std::vector<double> fits(kRuns);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < kRuns; ++r)
        fits[static_cast<std::size_t>(r)] =
            emo::optimize(ObjectiveKind::Otsu, two, 1, params, kBaseSeed + r).best_fitness;
    for (double f : fits)
        if (f == 5625.0) ++exact;

    const ProbDist constant = testsup::impulse_dist({{100, 1.0}});
    const bool constant_zero =
        otsu_objective(constant, ThresholdVector::checked({51})) == 0.0 &&
        kapur_objective(constant, ThresholdVector::checked({51})) == 0.0 &&
        otsu_objective(constant, ThresholdVector::checked({60, 130, 190})) == 0.0;
    const bool pure_zero = kapur_objective(two, ThresholdVector::checked({51})) == 0.0;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "two-impulse otsu k=1 exact in %d/35, constant-image objectives %s, "
                  "kapur pure-class %s",
                  exact, constant_zero ? "0" : "nonzero", pure_zero ? "0" : "nonzero");
    report(2, "analytic cases", exact == kRuns && constant_zero && pure_zero, detail);
}

void criterion_5() {
    const auto psnr10 = psnr_from_rmse(10.0);
    const bool psnr_ok = psnr10.has_value() && std::fabs(*psnr10 - 28.131) <= 1e-3;

    RasterImage img;
    img.width = 2;
    img.height = 1;
    img.channels = 1;
    img.samples = {10, 200};
    const bool sentinel_ok = !psnr(img, img).has_value();

    const double std3 = stats::run_std(std::vector<double>{1.0, 2.0, 3.0});
    const bool std_ok = std::fabs(std3 - std::sqrt(2.0 / 3.0)) <= 1e-12;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "psnr(rmse=10)=%.6f dB, identical-image sentinel %s, run_std err %.1e",
                  psnr10.value_or(-1.0), sentinel_ok ? "set" : "missing",
                  std::fabs(std3 - std::sqrt(2.0 / 3.0)));
    report(5, "metric fidelity", psnr_ok && sentinel_ok && std_ok, detail);
}

void criterion_6() {
    bool enumeration_ok = true;
    int arrangements = 0;
    for (int n = 1; n <= 6 && enumeration_ok; ++n) {
        for (int m = 1; m <= 6 && enumeration_ok; ++m) {
            std::vector<bool> mask(static_cast<std::size_t>(n + m), false);
            std::fill(mask.begin(), mask.begin() + n, true);
            std::sort(mask.begin(), mask.end());
            do {
                std::vector<double> a, b;
                for (int pos = 0; pos < n + m; ++pos)
                    (mask[static_cast<std::size_t>(pos)] ? a : b).push_back(pos + 1.0);
                const double dp = stats::rank_sum_p_exact(a, b);
                const double brute = testsup::enum_ranksum_p(a, b);
                if (std::fabs(dp - brute) > 1e-12) enumeration_ok = false;
                ++arrangements;
            } while (std::next_permutation(mask.begin(), mask.end()) && enumeration_ok);
        }
    }

    const double p_split = stats::rank_sum_p_exact(std::vector<double>{1.0, 2.0, 3.0},
                                                   std::vector<double>{10.0, 11.0, 12.0});
    const bool split_ok = std::fabs(p_split - 0.1) <= 1e-12;

    Rng rng(2024);
    double worst_gap = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a, b;
        for (int i = 0; i < 10; ++i) a.push_back(rng.uniform01());
        for (int i = 0; i < 10; ++i) b.push_back(rng.uniform01() + trial * 0.001);
        worst_gap = std::max(
            worst_gap, std::fabs(stats::rank_sum_p_normal(a, b) - stats::rank_sum_p_exact(a, b)));
    }

    const std::vector<double> same{3.0, 3.0, 3.0, 3.0, 3.0};
    const bool ties_ok = stats::wilcoxon_rank_sum(same, same).p_value == 1.0;

    char detail[224];
    std::snprintf(detail, sizeof(detail),
                  "%d arrangements match enumeration, p([1,2,3],[10,11,12])=%.12f, "
                  "max exact-vs-normal gap %.2e (limit 5e-3), identical-sample p %s",
                  arrangements, p_split, worst_gap, ties_ok ? "= 1" : "!= 1");
    report(6, "rank-sum test correctness",
           enumeration_ok && split_ok && worst_gap <= 5e-3 && ties_ok, detail);
}

void criterion_7() {
    cli::CampaignConfig config;
    config.input = testsup::data_path("suite/quad_c.json");
    config.ks = {2, 3};
    config.runs = 12;
    config.base_seed = 17;

#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(2);
#endif
    const std::string parallel_a = cli::segment_report(config).dump(2);
    const std::string parallel_b = cli::segment_report(config).dump(2);
#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
    const std::string serial = cli::segment_report(config).dump(2);
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif

    const bool identical = parallel_a == parallel_b && parallel_a == serial;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "report bytes repeat=%s, parallel-vs-serial=%s (%zu bytes)",
                  parallel_a == parallel_b ? "identical" : "DIFFER",
                  parallel_a == serial ? "identical" : "DIFFER", parallel_a.size());
    report(7, "byte-identical reports, including parallel execution", identical, detail);
}

void criterion_8() {
    struct Expectation {
        const char* file;
        int th_lo, th_hi;     // expected k=2 thresholds
        double psnr;          // expected PSNR at those thresholds (dB), 0.5 tol; 0 = skip
        double mean_fitness;  // expected mean best fitness, 1% tol; 0 = skip
    };
    const Expectation cases[] = {
        {"cameraman.pgm", 70, 144, 17.247, 3606.3},
        {"lena.pgm", 91, 149, 0.0, 0.0},
    };

    for (const auto& expected : cases) {
        const std::string path = testsup::data_path(std::string("benchmark/") + expected.file);
        if (!std::filesystem::exists(path)) {
            report_skip(8, "benchmark image reproduction",
                        std::string(expected.file) +
                            " not present under data/benchmark (optional, user-supplied)");
            continue;
        }

        cli::CampaignConfig config;
        config.input = path;
        config.ks = {2};
        config.runs = kRuns;
        config.base_seed = kBaseSeed;
        const cli::Json report_json = cli::segment_report(config);
        const auto& channel = report_json["results"][0]["channels"][0];
        const auto best = channel["aggregate"]["best_thresholds"].get<std::vector<int>>();
        const double mean_fitness = channel["aggregate"]["fitness_mean"].get<double>();

        bool ok = best.size() == 2 && std::abs(best[0] - expected.th_lo) <= 2 &&
                  std::abs(best[1] - expected.th_hi) <= 2;
        std::string detail = expected.file;
        detail += " thresholds (" + std::to_string(best[0]) + "," + std::to_string(best[1]) + ")";
        if (expected.psnr > 0.0) {
            const auto& psnr_json = channel["aggregate"]["psnr_mean"];
            const double mean_psnr = psnr_json.is_null() ? -1.0 : psnr_json.get<double>();
            ok = ok && std::fabs(mean_psnr - expected.psnr) <= 0.5;
            detail += " psnr " + std::to_string(mean_psnr);
        }
        if (expected.mean_fitness > 0.0) {
            ok = ok && std::fabs(mean_fitness - expected.mean_fitness) <=
                           0.01 * expected.mean_fitness;
            detail += " mean fitness " + std::to_string(mean_fitness);
        }
        report(8, "benchmark image reproduction", ok, detail);
    }
}

void criterion_9(const std::vector<SuiteData>& suite) {
    int satisfied = 0;
    std::string note;
    for (const auto& entry : suite) {
        const double k2 = entry.otsu_mean_psnr.at(2);
        const double k5 = entry.otsu_mean_psnr.at(5);
        // Impulse histograms reconstruct perfectly at every k; the saturated
        // (infinite PSNR) case counts as satisfying the trend.
        const bool ok = (k2 < 0.0 && k5 < 0.0) || (k5 > k2);
        if (ok)
            ++satisfied;
        else
            note += entry.name + " ";
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail), "%d/10 images trend upward%s%s", satisfied,
                  note.empty() ? "" : ", flat or down: ", note.c_str());
    report(9, "mean otsu psnr grows from k=2 to k=5", satisfied >= 9, detail);
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    std::vector<SuiteData> suite;
    suite.reserve(kSuite.size());
    for (const auto& name : kSuite) suite.push_back(evaluate_suite_entry(name));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    criterion_1_and_3_and_4(suite, elapsed);
    criterion_2();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(suite);

    if (failures > 0) {
        std::printf("%d criterion check(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
