#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "emt/image.hpp"
#include "emt/objectives.hpp"

namespace emt {

// Per-pixel class indices in [0, k] for a k-threshold segmentation.
struct LabelMap {
    int width = 0;
    int height = 0;
    int class_count = 0;  // k + 1
    std::vector<std::uint8_t> labels;
};

// Assigns each pixel the number of thresholds at or below its value, so a
// pixel equal to a threshold lands in the class above it.
LabelMap classify(const RasterImage& channel, const ThresholdVector& th);

// The intensity every pixel of a class is rendered at: the rounded class
// mean from `dist`, or the class's lower level when the class is empty.
std::vector<std::uint8_t> class_render_levels(const ProbDist& dist, const ThresholdVector& th);

// Renders the segmented channel: each pixel replaced by its class level.
RasterImage reconstruct(const LabelMap& labels, const RasterImage& channel,
                        const ThresholdVector& th, const ProbDist& dist);

// Root mean square error pooled over all samples (all three components for RGB).
double rmse(const RasterImage& original, const RasterImage& segmented);

// 20 log10(255 / RMSE); an empty optional is the infinite-PSNR case (RMSE 0).
std::optional<double> psnr_from_rmse(double rmse_value);
std::optional<double> psnr(const RasterImage& original, const RasterImage& segmented);

// Distribution-side RMSE of class-mean rendering, used when the pipeline
// input is a histogram file rather than pixels: sum_b p[b] (b - level(b))^2.
double rmse_from_dist(const ProbDist& dist, const ThresholdVector& th);

}  // namespace emt
