// Command-line front end: segment / oracle / noise / compare.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 validation error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "emt/errors.hpp"
#include "emt/report.hpp"

namespace {

using emt::cli::CampaignConfig;

// Applies a JSON config document, then lets explicit flags override it.
void apply_config_file(CampaignConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw emt::IoError(path + ": cannot open config file");
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw emt::IoError(path + ": config is not valid JSON");

    if (j.contains("input")) config.input = j["input"].get<std::string>();
    if (j.contains("method")) config.method = emt::parse_objective(j["method"].get<std::string>());
    if (j.contains("k")) config.ks = {j["k"].get<int>()};
    if (j.contains("k_values")) config.ks = j["k_values"].get<std::vector<int>>();
    if (j.contains("runs")) config.runs = j["runs"].get<int>();
    if (j.contains("base_seed")) config.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("report")) config.report_path = j["report"].get<std::string>();
    if (j.contains("segmented")) config.segmented_path = j["segmented"].get<std::string>();
    if (j.contains("emo")) {
        const auto& e = j["emo"];
        if (e.contains("iter_max")) config.emo.iter_max = e["iter_max"].get<int>();
        if (e.contains("iter_local")) config.emo.iter_local = e["iter_local"].get<int>();
        if (e.contains("delta")) config.emo.delta = e["delta"].get<double>();
        if (e.contains("pop_size")) config.emo.pop_size = e["pop_size"].get<int>();
        if (e.contains("stall_fraction"))
            config.emo.stall_fraction = e["stall_fraction"].get<double>();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multilevel image thresholding with an electromagnetism-like optimizer"};
    app.require_subcommand(1);

    // --- segment ---
    auto* segment = app.add_subcommand(
        "segment", "Run a seeded optimizer campaign over an image or histogram file");
    std::string seg_input, seg_method = "otsu", seg_config_file;
    int seg_k = 0, seg_runs = 0;
    std::uint64_t seg_seed = 0;
    std::string seg_report, seg_segmented;
    int seg_iter_max = 0, seg_iter_local = -1, seg_pop = 0;
    double seg_delta = 0.0, seg_stall = 0.0;
    segment->add_option("--input,-i", seg_input, "Image (PGM/PPM) or histogram file");
    segment->add_option("--method,-m", seg_method, "Objective: otsu or kapur");
    segment->add_option("--k,-k", seg_k, "Number of thresholds (default: sweep 2..5)");
    segment->add_option("--runs", seg_runs, "Independent runs per configuration (default 35)");
    segment->add_option("--base-seed", seg_seed, "Run r uses seed base_seed + r (default 1)");
    segment->add_option("--iter-max", seg_iter_max, "Iteration budget (default 150)");
    segment->add_option("--iter-local", seg_iter_local, "Local-search trials per dimension (default 10)");
    segment->add_option("--delta", seg_delta, "Local-search radius fraction (default 0.025)");
    segment->add_option("--pop-size", seg_pop, "Population size (default 50)");
    segment->add_option("--stall-fraction", seg_stall, "Stop after this fraction of iter_max without improvement (default 0.1)");
    segment->add_option("--report,-o", seg_report, "Report output path (default: stdout)");
    segment->add_option("--segmented", seg_segmented, "Write the segmented image here (single k only)");
    segment->add_option("--config", seg_config_file, "JSON config; explicit flags override it");

    // --- oracle ---
    auto* oracle = app.add_subcommand(
        "oracle", "Exhaustive ground-truth search over all threshold vectors (k <= 3)");
    std::string ora_input, ora_method = "otsu", ora_report;
    int ora_k = 2;
    oracle->add_option("--input,-i", ora_input, "Image or histogram file")->required();
    oracle->add_option("--method,-m", ora_method, "Objective: otsu or kapur");
    oracle->add_option("--k,-k", ora_k, "Number of thresholds (1..3)")->required();
    oracle->add_option("--report,-o", ora_report, "Report output path (default: stdout)");

    // --- noise ---
    auto* noise = app.add_subcommand("noise", "Write a noise-corrupted copy of an image");
    std::string noi_input, noi_model = "gaussian", noi_output;
    double noi_mean = 0.0, noi_variance = 0.1, noi_fraction = 0.02;
    std::uint64_t noi_seed = 1;
    noise->add_option("--input,-i", noi_input, "Image file (PGM/PPM)")->required();
    noise->add_option("--model", noi_model, "gaussian or salt-pepper");
    noise->add_option("--mean", noi_mean, "Gaussian mean, unit intensity scale (default 0)");
    noise->add_option("--variance", noi_variance, "Gaussian variance, unit scale (default 0.1)");
    noise->add_option("--fraction", noi_fraction, "Salt-and-pepper pixel fraction (default 0.02)");
    noise->add_option("--seed", noi_seed, "Noise seed (default 1)");
    noise->add_option("--output,-o", noi_output, "Output image path")->required();

    // --- compare ---
    auto* compare =
        app.add_subcommand("compare", "Rank-sum test between two reports on a shared metric");
    std::string cmp_a, cmp_b, cmp_metric = "psnr";
    compare->add_option("--report-a,-a", cmp_a, "First report")->required();
    compare->add_option("--report-b,-b", cmp_b, "Second report")->required();
    compare->add_option("--metric", cmp_metric, "psnr, fitness or iterations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (segment->parsed()) {
            CampaignConfig config;
            if (!seg_config_file.empty()) apply_config_file(config, seg_config_file);
            if (segment->count("--input")) config.input = seg_input;
            if (segment->count("--method")) config.method = emt::parse_objective(seg_method);
            if (segment->count("--k")) config.ks = {seg_k};
            if (segment->count("--runs")) config.runs = seg_runs;
            if (segment->count("--base-seed")) config.base_seed = seg_seed;
            if (segment->count("--iter-max")) config.emo.iter_max = seg_iter_max;
            if (segment->count("--iter-local")) config.emo.iter_local = seg_iter_local;
            if (segment->count("--delta")) config.emo.delta = seg_delta;
            if (segment->count("--pop-size")) config.emo.pop_size = seg_pop;
            if (segment->count("--stall-fraction")) config.emo.stall_fraction = seg_stall;
            if (segment->count("--report")) config.report_path = seg_report;
            if (segment->count("--segmented")) config.segmented_path = seg_segmented;
            return emt::cli::cmd_segment(config);
        }
        if (oracle->parsed()) {
            CampaignConfig config;
            config.input = ora_input;
            config.method = emt::parse_objective(ora_method);
            config.report_path = ora_report;
            return emt::cli::cmd_oracle(config, ora_k);
        }
        if (noise->parsed())
            return emt::cli::cmd_noise(noi_input, noi_model, noi_mean, noi_variance, noi_fraction,
                                       noi_seed, noi_output);
        if (compare->parsed()) return emt::cli::cmd_compare(cmp_a, cmp_b, cmp_metric);
    } catch (const emt::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const emt::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
