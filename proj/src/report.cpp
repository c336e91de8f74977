#include "emt/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "emt/errors.hpp"
#include "emt/oracle.hpp"
#include "emt/segmentation.hpp"

namespace emt::cli {

void CampaignConfig::validate() const {
    if (input.empty()) throw ValidationError("campaign: no input given");
    if (ks.empty()) throw ValidationError("campaign: no threshold counts selected");
    for (int k : ks)
        if (k < 1 || k > 5)
            throw ValidationError("campaign: k must be in [1, 5], got " + std::to_string(k));
    if (runs < 1) throw ValidationError("campaign: runs must be >= 1");
    emo.validate();
}

namespace {

std::string hash_string(std::uint64_t hash) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

bool sniff_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    return in && m0 == 'P' && (m1 == '5' || m1 == '6');
}

Json emo_params_json(const emo::EmoParams& p) {
    Json j;
    j["iter_max"] = p.iter_max;
    j["iter_local"] = p.iter_local;
    j["delta"] = p.delta;
    j["pop_size"] = p.pop_size;
    j["stall_fraction"] = p.stall_fraction;
    j["lower"] = p.lower;
    j["upper"] = p.upper;
    return j;
}

Json config_json(const CampaignConfig& config, const LoadedInput& input) {
    Json j;
    j["input"] = config.input;
    j["input_type"] = input.is_image ? "image" : "histogram";
    j["content_hash"] = hash_string(input.hash);
    j["method"] = objective_name(config.method);
    j["k_values"] = config.ks;
    j["runs"] = config.runs;
    j["base_seed"] = config.base_seed;
    j["emo"] = emo_params_json(config.emo);
    return j;
}

Json run_json(const stats::RunRecord& record) {
    Json j;
    j["seed"] = record.seed;
    j["thresholds"] = record.thresholds;
    j["fitness"] = record.fitness;
    j["iterations"] = record.iterations;
    j["stop_reason"] = record.stop_reason;
    j["psnr"] = record.psnr.has_value() ? Json(*record.psnr) : Json(nullptr);
    j["psnr_infinite"] = !record.psnr.has_value();
    j["history"] = record.history;
    return j;
}

Json aggregate_json(const stats::RunAggregate& agg) {
    Json j;
    j["fitness_mean"] = agg.fitness_mean;
    j["fitness_std"] = agg.fitness_std;
    j["psnr_mean"] = agg.psnr_mean.has_value() ? Json(*agg.psnr_mean) : Json(nullptr);
    j["psnr_std"] = agg.psnr_std.has_value() ? Json(*agg.psnr_std) : Json(nullptr);
    j["psnr_infinite_runs"] = agg.psnr_infinite_runs;
    j["iterations_mean"] = agg.iterations_mean;
    j["iterations_median"] = agg.iterations_median;
    j["best_thresholds"] = agg.best_thresholds;
    j["best_seed"] = agg.best_seed;
    j["best_fitness"] = agg.best_fitness;
    return j;
}

// PSNR of one run: through pixels when the input is an image, through the
// distribution when it is a histogram file.
std::optional<double> run_psnr(const LoadedInput& input, std::size_t channel,
                               const ThresholdVector& th) {
    if (input.is_image) {
        const RasterImage& ch = input.channels[channel];
        const LabelMap labels = classify(ch, th);
        const RasterImage rendered = reconstruct(labels, ch, th, input.dists[channel]);
        return psnr(ch, rendered);
    }
    return psnr_from_rmse(rmse_from_dist(input.dists[channel], th));
}

stats::RunRecord make_record(const LoadedInput& input, const CampaignConfig& config, int k,
                             std::size_t channel, int run_index) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(run_index);
    const emo::OptResult res =
        emo::optimize(config.method, input.dists[channel], k, config.emo, seed);

    stats::RunRecord record;
    record.k = k;
    record.channel = static_cast<int>(channel);
    record.seed = seed;
    record.thresholds = res.best_thresholds.values;
    record.fitness = res.best_fitness;
    record.iterations = res.iterations_run;
    record.stop_reason = emo::stop_reason_name(res.stop_reason);
    record.psnr = run_psnr(input, channel, res.best_thresholds);
    record.history = res.history;
    return record;
}

// Pooled RMSE across the three channel renderings of an RGB image.
Json pooled_psnr_json(const LoadedInput& input, const Json& channels_json) {
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < input.channels.size(); ++c) {
        const auto& best = channels_json[c]["aggregate"]["best_thresholds"];
        const ThresholdVector th = ThresholdVector::checked(best.get<std::vector<int>>());
        const RasterImage& ch = input.channels[c];
        const RasterImage rendered = reconstruct(classify(ch, th), ch, th, input.dists[c]);
        for (std::size_t i = 0; i < ch.samples.size(); ++i) {
            const double d =
                static_cast<double>(ch.samples[i]) - static_cast<double>(rendered.samples[i]);
            sum_sq += d * d;
        }
        count += ch.samples.size();
    }
    const auto pooled = psnr_from_rmse(std::sqrt(sum_sq / static_cast<double>(count)));
    Json j;
    j["psnr"] = pooled.has_value() ? Json(*pooled) : Json(nullptr);
    j["psnr_infinite"] = !pooled.has_value();
    return j;
}

}  // namespace

LoadedInput load_input(const std::string& path) {
    LoadedInput input;
    input.path = path;
    if (sniff_image(path)) {
        input.is_image = true;
        input.image = load_image(path);
        input.hash = content_hash(input.image);
        input.channels = split_channels(input.image);
        input.names = input.image.channels == 3
                          ? std::vector<std::string>{"red", "green", "blue"}
                          : std::vector<std::string>{"gray"};
        for (const auto& ch : input.channels)
            input.dists.push_back(normalize(build_histogram(ch)));
    } else {
        input.is_image = false;
        const ProbDist dist = load_histogram_file(path);
        input.hash = content_hash(dist);
        input.names = {"gray"};
        input.dists = {dist};
    }
    return input;
}

Json segment_report(const CampaignConfig& config) {
    config.validate();
    const LoadedInput input = load_input(config.input);

    Json report;
    report["schema_version"] = kSchemaVersion;
    report["mode"] = "emo";
    report["config"] = config_json(config, input);
    if (input.is_image) {
        Json img;
        img["width"] = input.image.width;
        img["height"] = input.image.height;
        img["channels"] = input.image.channels;
        report["image"] = img;
    }

    Json results = Json::array();
    for (int k : config.ks) {
        Json k_block;
        k_block["k"] = k;
        Json channels_json = Json::array();
        for (std::size_t c = 0; c < input.dists.size(); ++c) {
            std::vector<stats::RunRecord> records(static_cast<std::size_t>(config.runs));
#pragma omp parallel for schedule(dynamic)
            for (int r = 0; r < config.runs; ++r)
                records[static_cast<std::size_t>(r)] = make_record(input, config, k, c, r);

            Json channel_json;
            channel_json["channel"] = c;
            channel_json["name"] = input.names[c];
            Json runs_json = Json::array();
            for (const auto& record : records) runs_json.push_back(run_json(record));
            channel_json["runs"] = std::move(runs_json);
            channel_json["aggregate"] = aggregate_json(stats::aggregate_runs(records));
            channels_json.push_back(std::move(channel_json));
        }
        if (input.is_image && input.channels.size() == 3)
            k_block["pooled_psnr"] = pooled_psnr_json(input, channels_json);
        k_block["channels"] = std::move(channels_json);
        results.push_back(std::move(k_block));
    }
    report["results"] = std::move(results);
    return report;
}

Json oracle_report(const CampaignConfig& config) {
    if (config.ks.size() != 1)
        throw ValidationError("oracle: exactly one k required");
    const int k = config.ks.front();
    if (k < 1 || k > 3)
        throw ValidationError("oracle: k must be in [1, 3], got " + std::to_string(k));
    const LoadedInput input = load_input(config.input);

    Json report;
    report["schema_version"] = kSchemaVersion;
    report["mode"] = "oracle";
    report["config"] = config_json(config, input);

    Json k_block;
    k_block["k"] = k;
    Json channels_json = Json::array();
    for (std::size_t c = 0; c < input.dists.size(); ++c) {
        const auto res = oracle::exhaustive_search(config.method, input.dists[c], k);

        stats::RunRecord record;
        record.k = k;
        record.channel = static_cast<int>(c);
        record.seed = 0;
        record.thresholds = res.best_thresholds.values;
        record.fitness = res.best_fitness;
        record.iterations = 0;
        record.stop_reason = "exhaustive";
        record.psnr = run_psnr(input, c, res.best_thresholds);

        Json rec_json = run_json(record);
        rec_json["evaluations"] = res.evaluations;
        rec_json["optima_count"] = res.optima_count;

        Json channel_json;
        channel_json["channel"] = c;
        channel_json["name"] = input.names[c];
        channel_json["runs"] = Json::array({std::move(rec_json)});
        channel_json["aggregate"] =
            aggregate_json(stats::aggregate_runs({&record, 1}));
        channels_json.push_back(std::move(channel_json));
    }
    k_block["channels"] = std::move(channels_json);
    report["results"] = Json::array({std::move(k_block)});
    return report;
}

RasterImage render_segmented(const LoadedInput& input, const Json& report) {
    if (!input.is_image)
        throw ValidationError("segmented output requires an image input");
    const auto& results = report.at("results");
    if (results.size() != 1)
        throw ValidationError("segmented output requires a single k (pass --k)");

    const auto& channels_json = results[0].at("channels");
    std::vector<RasterImage> rendered;
    for (std::size_t c = 0; c < input.channels.size(); ++c) {
        const ThresholdVector th = ThresholdVector::checked(
            channels_json[c]["aggregate"]["best_thresholds"].get<std::vector<int>>());
        rendered.push_back(
            reconstruct(classify(input.channels[c], th), input.channels[c], th, input.dists[c]));
    }

    if (rendered.size() == 1) return rendered.front();
    RasterImage out;
    out.width = input.image.width;
    out.height = input.image.height;
    out.channels = 3;
    out.samples.resize(input.image.samples.size());
    for (std::size_t i = 0; i < out.pixel_count(); ++i)
        for (std::size_t c = 0; c < 3; ++c)
            out.samples[3 * i + c] = rendered[c].samples[i];
    return out;
}

namespace {

void collect_metric(const Json& report, const std::string& metric, std::vector<double>& out,
                    std::size_t& excluded) {
    for (const auto& k_block : report.at("results")) {
        for (const auto& channel : k_block.at("channels")) {
            for (const auto& run : channel.at("runs")) {
                if (metric == "psnr") {
                    if (run.at("psnr_infinite").get<bool>())
                        ++excluded;
                    else
                        out.push_back(run.at("psnr").get<double>());
                } else if (metric == "fitness") {
                    out.push_back(run.at("fitness").get<double>());
                } else if (metric == "iterations") {
                    out.push_back(run.at("iterations").get<double>());
                } else {
                    throw ValidationError("compare: unknown metric '" + metric + "'");
                }
            }
        }
    }
}

}  // namespace

CompareOutcome compare_reports(const Json& report_a, const Json& report_b,
                               const std::string& metric) {
    std::vector<double> a, b;
    CompareOutcome outcome;
    collect_metric(report_a, metric, a, outcome.excluded_a);
    collect_metric(report_b, metric, b, outcome.excluded_b);
    if (a.empty() || b.empty())
        throw ValidationError("compare: metric '" + metric + "' missing from a report");

    const auto result = stats::wilcoxon_rank_sum(a, b);
    outcome.p_value = result.p_value;
    outcome.exact = result.exact;
    outcome.significant = result.p_value < 0.05;
    outcome.used_a = a.size();
    outcome.used_b = b.size();
    return outcome;
}

Json load_report_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open file");
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw IoError(path + ": not a valid report (JSON parse failed)");
    if (!j.contains("results")) throw IoError(path + ": not a report file");
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << text;
    if (!out) throw IoError(path + ": write failed");
}

int cmd_segment(const CampaignConfig& config) {
    const Json report = segment_report(config);
    const std::string text = report.dump(2) + "\n";
    if (config.report_path.empty())
        std::cout << text;
    else
        write_text_file(config.report_path, text);

    if (!config.segmented_path.empty()) {
        const LoadedInput input = load_input(config.input);
        save_image(render_segmented(input, report), config.segmented_path);
    }
    return 0;
}

int cmd_oracle(const CampaignConfig& config, int k) {
    CampaignConfig oracle_config = config;
    oracle_config.ks = {k};
    const Json report = oracle_report(oracle_config);
    const std::string text = report.dump(2) + "\n";
    if (config.report_path.empty())
        std::cout << text;
    else
        write_text_file(config.report_path, text);
    return 0;
}

int cmd_noise(const std::string& input, const std::string& model, double mean, double variance,
              double fraction, std::uint64_t seed, const std::string& output) {
    const RasterImage image = load_image(input);
    RasterImage noisy;
    if (model == "gaussian")
        noisy = add_gaussian_noise(image, mean, variance, seed);
    else if (model == "salt-pepper")
        noisy = add_salt_pepper(image, fraction, seed);
    else
        throw ValidationError("noise: unknown model '" + model +
                              "' (expected gaussian or salt-pepper)");
    save_image(noisy, output);
    return 0;
}

int cmd_compare(const std::string& report_a, const std::string& report_b,
                const std::string& metric) {
    const Json a = load_report_file(report_a);
    const Json b = load_report_file(report_b);
    const CompareOutcome outcome = compare_reports(a, b, metric);

    if (outcome.excluded_a > 0 || outcome.excluded_b > 0)
        std::cerr << "warning: excluded " << outcome.excluded_a << " + " << outcome.excluded_b
                  << " infinite-PSNR runs from the comparison\n";
    std::cout << "metric: " << metric << "\n"
              << "samples: " << outcome.used_a << " vs " << outcome.used_b << "\n"
              << "test: rank-sum (" << (outcome.exact ? "exact" : "normal approximation") << ")\n"
              << "p-value: " << outcome.p_value << "\n"
              << "significant at 5%: " << (outcome.significant ? "yes" : "no") << "\n";
    return 0;
}

}  // namespace emt::cli
