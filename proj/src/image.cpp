#include "emt/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "emt/errors.hpp"
#include "emt/rng.hpp"
#include "json.hpp"

namespace emt {

std::uint64_t Histogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double ProbDist::sum() const {
    return std::accumulate(p.begin(), p.end(), 0.0);
}

namespace {

// Reads the next header token of a PNM file, skipping whitespace and
// '#' comments that run to end of line.
std::string next_header_token(std::istream& in) {
    std::string tok;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c) && c != '#') {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c == '#') in.unget();
    return tok;
}

long parse_header_number(std::istream& in, const std::string& path, const char* what) {
    const std::string tok = next_header_token(in);
    if (tok.empty()) throw IoError(path + ": truncated header while reading " + what);
    long value = 0;
    for (char ch : tok) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw IoError(path + ": malformed " + what + " '" + tok + "'");
        value = value * 10 + (ch - '0');
        if (value > 1 << 30) throw IoError(path + ": implausible " + what);
    }
    return value;
}

}  // namespace

RasterImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open file");

    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (!in || m0 != 'P' || (m1 != '5' && m1 != '6'))
        throw IoError(path + ": unsupported format (expected binary PGM 'P5' or PPM 'P6')");

    RasterImage img;
    img.channels = (m1 == '6') ? 3 : 1;
    img.width = static_cast<int>(parse_header_number(in, path, "width"));
    img.height = static_cast<int>(parse_header_number(in, path, "height"));
    const long maxval = parse_header_number(in, path, "maxval");
    if (img.width <= 0 || img.height <= 0)
        throw IoError(path + ": degenerate dimensions");
    if (maxval <= 0 || maxval > 255)
        throw IoError(path + ": only 8-bit depth supported (maxval " + std::to_string(maxval) + ")");
    // The header numbers are followed by exactly one whitespace byte, already
    // consumed by the tokenizer.

    const std::size_t n = img.pixel_count() * static_cast<std::size_t>(img.channels);
    img.samples.resize(n);
    in.read(reinterpret_cast<char*>(img.samples.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw IoError(path + ": truncated pixel data");
    return img;
}

void save_image(const RasterImage& image, const std::string& path) {
    if (image.channels != 1 && image.channels != 3)
        throw ValidationError("save_image: channels must be 1 or 3");
    if (image.samples.size() != image.pixel_count() * static_cast<std::size_t>(image.channels))
        throw ValidationError("save_image: sample buffer does not match dimensions");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << (image.channels == 3 ? "P6" : "P5") << "\n"
        << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.samples.data()),
              static_cast<std::streamsize>(image.samples.size()));
    if (!out) throw IoError(path + ": write failed");
}

std::vector<RasterImage> split_channels(const RasterImage& image) {
    if (image.channels == 1) return {image};
    if (image.channels != 3)
        throw ValidationError("split_channels: channels must be 1 or 3");

    std::vector<RasterImage> planes(3);
    for (int c = 0; c < 3; ++c) {
        planes[c].width = image.width;
        planes[c].height = image.height;
        planes[c].channels = 1;
        planes[c].samples.resize(image.pixel_count());
    }
    for (std::size_t i = 0; i < image.pixel_count(); ++i) {
        planes[0].samples[i] = image.samples[3 * i];
        planes[1].samples[i] = image.samples[3 * i + 1];
        planes[2].samples[i] = image.samples[3 * i + 2];
    }
    return planes;
}

Histogram build_histogram(const RasterImage& channel) {
    if (channel.channels != 1)
        throw ValidationError("build_histogram: expected a single-component channel");
    Histogram h;
    for (std::uint8_t s : channel.samples) ++h.counts[s];
    return h;
}

ProbDist normalize(const Histogram& hist) {
    const std::uint64_t np = hist.total();
    if (np == 0) throw ValidationError("normalize: empty histogram (all counts zero)");
    ProbDist d;
    const double inv = 1.0 / static_cast<double>(np);
    for (int i = 0; i < 256; ++i) d.p[i] = static_cast<double>(hist.counts[i]) * inv;
    return d;
}

RasterImage add_gaussian_noise(const RasterImage& image, double mean, double variance,
                               std::uint64_t seed) {
    if (variance < 0.0) throw ValidationError("add_gaussian_noise: negative variance");
    const double stddev = std::sqrt(variance);
    Rng rng(seed);
    RasterImage out = image;
    for (auto& s : out.samples) {
        const double g = rng.gaussian(mean, stddev);
        const double v = std::round(255.0 * (static_cast<double>(s) / 255.0 + g));
        s = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
    return out;
}

RasterImage add_salt_pepper(const RasterImage& image, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw ValidationError("add_salt_pepper: fraction must be in [0, 1]");
    Rng rng(seed);
    RasterImage out = image;
    const std::size_t np = image.pixel_count();
    const auto corrupt = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(np)));

    // Partial Fisher-Yates over pixel positions gives exactly `corrupt`
    // distinct positions per channel.
    std::vector<std::uint32_t> idx(np);
    for (int c = 0; c < image.channels; ++c) {
        for (std::size_t i = 0; i < np; ++i) idx[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = 0; i < corrupt; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(np - i));
            std::swap(idx[i], idx[j]);
            const std::size_t pos = static_cast<std::size_t>(idx[i]) * image.channels + c;
            out.samples[pos] = rng.uniform01() < 0.5 ? 0 : 255;
        }
    }
    return out;
}

ProbDist load_histogram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::vector<double> values;
    values.reserve(256);
    const auto parsed = nlohmann::json::parse(text, nullptr, false);
    if (parsed.is_array()) {
        for (const auto& v : parsed) {
            if (!v.is_number()) throw IoError(path + ": histogram array holds a non-number");
            values.push_back(v.get<double>());
        }
    } else {
        // Fall back to whitespace/comma separated values.
        std::string cleaned = text;
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        std::istringstream is(cleaned);
        double v = 0.0;
        while (is >> v) values.push_back(v);
        if (!is.eof()) throw IoError(path + ": malformed histogram value");
    }

    if (values.size() != 256)
        throw IoError(path + ": expected 256 histogram entries, found " +
                      std::to_string(values.size()));
    double sum = 0.0;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw IoError(path + ": histogram entries must be finite and non-negative");
        sum += v;
    }
    if (sum <= 0.0) throw IoError(path + ": histogram has zero total mass");

    // Counts and probabilities share one normalization path; a file that
    // already sums to ~1 is simply renormalized exactly.
    ProbDist d;
    for (int i = 0; i < 256; ++i) d.p[i] = values[i] / sum;
    return d;
}

void save_histogram_file(const std::array<double, 256>& values, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (double v : values) arr.push_back(v);
    out << arr.dump() << "\n";
    if (!out) throw IoError(path + ": write failed");
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= kFnvPrime;
    }
}

}  // namespace

std::uint64_t content_hash(const RasterImage& image) {
    std::uint64_t h = kFnvOffset;
    const std::int32_t dims[3] = {image.width, image.height, image.channels};
    fnv_mix(h, dims, sizeof(dims));
    fnv_mix(h, image.samples.data(), image.samples.size());
    return h;
}

std::uint64_t content_hash(const ProbDist& dist) {
    std::uint64_t h = kFnvOffset;
    fnv_mix(h, dist.p.data(), dist.p.size() * sizeof(double));
    return h;
}

}  // namespace emt
