#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace emt {

// 8-bit raster image. Samples are row-major; RGB images interleave the
// three components per pixel, grayscale images store one sample per pixel.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;  // 1 = grayscale, 3 = RGB
    std::vector<std::uint8_t> samples;

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    bool same_shape(const RasterImage& other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }
};

// Intensity histogram of one channel: counts[i] = pixels at level i.
struct Histogram {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t total() const;
};

// Normalized 256-bin probability distribution of one channel.
struct ProbDist {
    std::array<double, 256> p{};
    double sum() const;
};

// Binary PGM (P5) and PPM (P6) with maxval <= 255. Other formats and
// 16-bit depths are rejected.
RasterImage load_image(const std::string& path);
void save_image(const RasterImage& image, const std::string& path);

// Grayscale input yields one channel (a copy); RGB yields R, G, B planes.
std::vector<RasterImage> split_channels(const RasterImage& image);

Histogram build_histogram(const RasterImage& channel);
ProbDist normalize(const Histogram& hist);

// Additive Gaussian noise on the unit intensity scale: each sample s becomes
// clamp(round(255 * (s/255 + g)), 0, 255) with g ~ Normal(mean, variance).
RasterImage add_gaussian_noise(const RasterImage& image, double mean, double variance,
                               std::uint64_t seed);

// Impulsive noise: exactly round(fraction * pixel_count) distinct positions per
// channel are forced to 0 or 255 with equal probability.
RasterImage add_salt_pepper(const RasterImage& image, double fraction, std::uint64_t seed);

// Histogram exchange files: a text document holding an array of 256
// non-negative numbers, either raw counts or probabilities (detected when
// the sum is ~1). Accepts a JSON array or whitespace-separated values.
ProbDist load_histogram_file(const std::string& path);
void save_histogram_file(const std::array<double, 256>& values, const std::string& path);

// FNV-1a 64 over decoded content (dimensions + samples, or the 256 parsed
// bins), so re-encodings of the same data hash identically.
std::uint64_t content_hash(const RasterImage& image);
std::uint64_t content_hash(const ProbDist& dist);

}  // namespace emt
