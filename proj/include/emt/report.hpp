#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "emt/emo.hpp"
#include "emt/image.hpp"
#include "emt/objectives.hpp"
#include "emt/stats.hpp"

namespace emt::cli {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

// One segmentation campaign: input file, objective, threshold counts, and
// the number of seeded runs per configuration. When `ks` is left at its
// default the campaign sweeps k = 2..5.
struct CampaignConfig {
    std::string input;
    ObjectiveKind method = ObjectiveKind::Otsu;
    std::vector<int> ks = {2, 3, 4, 5};
    int runs = 35;
    std::uint64_t base_seed = 1;
    emo::EmoParams emo;
    std::string report_path;     // empty: write to stdout
    std::string segmented_path;  // empty: skip rendering

    void validate() const;
};

// Input of a campaign: either a decoded image (split into channels) or a
// probability distribution from a histogram exchange file.
struct LoadedInput {
    std::string path;
    bool is_image = false;
    std::uint64_t hash = 0;
    RasterImage image;                  // valid when is_image
    std::vector<std::string> names;     // "gray" or "red","green","blue"
    std::vector<RasterImage> channels;  // empty for histogram inputs
    std::vector<ProbDist> dists;        // one per channel
};

LoadedInput load_input(const std::string& path);

// Seeded optimizer campaign over every (k, channel); runs execute in
// parallel and are assembled in (k, channel, seed) order, so the report is
// byte-identical however they were scheduled.
Json segment_report(const CampaignConfig& config);

// Exhaustive-search report in the same schema, method tag "oracle".
Json oracle_report(const CampaignConfig& config);

// Renders the segmented image for the best thresholds per channel of the
// single-k report and returns it (PGM for grayscale, PPM for RGB).
RasterImage render_segmented(const LoadedInput& input, const Json& report);

struct CompareOutcome {
    double p_value = 1.0;
    bool significant = false;  // at the 5% level
    bool exact = false;
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    std::size_t excluded_a = 0;  // infinite-PSNR runs are excluded
    std::size_t excluded_b = 0;
};

// Pools the chosen metric ("psnr", "fitness" or "iterations") across every
// run in each report and applies the rank-sum test.
CompareOutcome compare_reports(const Json& report_a, const Json& report_b,
                               const std::string& metric);

Json load_report_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Subcommand drivers used by the executable; they throw on failure and the
// caller maps exceptions to exit codes.
int cmd_segment(const CampaignConfig& config);
int cmd_oracle(const CampaignConfig& config, int k);
int cmd_noise(const std::string& input, const std::string& model, double mean, double variance,
              double fraction, std::uint64_t seed, const std::string& output);
int cmd_compare(const std::string& report_a, const std::string& report_b,
                const std::string& metric);

}  // namespace emt::cli
