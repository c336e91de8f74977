#include "emt/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "emt/errors.hpp"

namespace emt {

namespace {

// label(v) = number of thresholds <= v, tabulated for all 256 levels.
std::array<std::uint8_t, 256> label_lut(const ThresholdVector& th) {
    std::array<std::uint8_t, 256> lut{};
    for (int v = 0; v < 256; ++v) {
        int label = 0;
        for (int t : th.values)
            if (t <= v) ++label;
        lut[v] = static_cast<std::uint8_t>(label);
    }
    return lut;
}

}  // namespace

LabelMap classify(const RasterImage& channel, const ThresholdVector& th) {
    if (channel.channels != 1)
        throw ValidationError("classify: expected a single-component channel");

    const auto lut = label_lut(th);
    LabelMap map;
    map.width = channel.width;
    map.height = channel.height;
    map.class_count = th.k() + 1;
    map.labels.resize(channel.samples.size());
    for (std::size_t i = 0; i < channel.samples.size(); ++i)
        map.labels[i] = lut[channel.samples[i]];
    return map;
}

std::vector<std::uint8_t> class_render_levels(const ProbDist& dist, const ThresholdVector& th) {
    const ClassDecomposition dec = class_decomposition(dist, th);
    const int k = th.k();
    std::vector<std::uint8_t> levels(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
        const int lower_level = (i == 0) ? 0 : th.values[static_cast<std::size_t>(i) - 1];
        const double value = dec.weights[static_cast<std::size_t>(i)] > 0.0
                                 ? std::round(dec.means[static_cast<std::size_t>(i)])
                                 : static_cast<double>(lower_level);
        levels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value);
    }
    return levels;
}

RasterImage reconstruct(const LabelMap& labels, const RasterImage& channel,
                        const ThresholdVector& th, const ProbDist& dist) {
    if (labels.width != channel.width || labels.height != channel.height ||
        channel.channels != 1)
        throw ValidationError("reconstruct: label map does not match channel");
    if (labels.class_count != th.k() + 1)
        throw ValidationError("reconstruct: label map built from different thresholds");

    const auto levels = class_render_levels(dist, th);
    RasterImage out = channel;
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = levels[labels.labels[i]];
    return out;
}

double rmse(const RasterImage& original, const RasterImage& segmented) {
    if (!original.same_shape(segmented))
        throw ValidationError("rmse: image shapes differ");
    if (original.samples.empty()) throw ValidationError("rmse: empty images");

    double sum_sq = 0.0;
    for (std::size_t i = 0; i < original.samples.size(); ++i) {
        const double d =
            static_cast<double>(original.samples[i]) - static_cast<double>(segmented.samples[i]);
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(original.samples.size()));
}

std::optional<double> psnr_from_rmse(double rmse_value) {
    if (rmse_value <= 0.0) return std::nullopt;  // identical images: infinite PSNR
    return 20.0 * std::log10(255.0 / rmse_value);
}

std::optional<double> psnr(const RasterImage& original, const RasterImage& segmented) {
    return psnr_from_rmse(rmse(original, segmented));
}

double rmse_from_dist(const ProbDist& dist, const ThresholdVector& th) {
    const auto levels = class_render_levels(dist, th);
    double sum_sq = 0.0;
    int label = 0;
    for (int b = 0; b < 256; ++b) {
        while (label < th.k() && th.values[static_cast<std::size_t>(label)] <= b) ++label;
        const double d = static_cast<double>(b) - static_cast<double>(levels[static_cast<std::size_t>(label)]);
        sum_sq += dist.p[b] * d * d;
    }
    return std::sqrt(sum_sq);
}

}  // namespace emt
