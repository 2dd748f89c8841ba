#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcgs {

// splitmix64 (Steele/Lea/Flood mixer over a golden-ratio counter). Chosen so
// any implementation can reproduce the streams from the seed alone; the exact
// draw order per generator is pinned in the README.
struct Splitmix64 {
    uint64_t state;

    explicit Splitmix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // top 53 bits -> [0,1)
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // shifted into (0,1] so log() below never sees zero
    double next_unit_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
    uint8_t next_byte() { return static_cast<uint8_t>(next() >> 56); }
};

// Box-Muller; the cosine branch is handed out first, the sine branch cached.
struct GaussianSource {
    Splitmix64 rng;
    bool have_spare = false;
    double spare = 0.0;

    explicit GaussianSource(uint64_t seed) : rng(seed) {}

    double next() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        double u1 = rng.next_unit_pos();
        double u2 = rng.next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }
};

// round half away from zero, clamp to [-128, 127], recenter to a byte
inline uint8_t quantize_to_byte(double x, double qs) {
    long long q = std::llround(x / qs);
    if (q < -128)
        q = -128;
    if (q > 127)
        q = 127;
    return static_cast<uint8_t>(q + 128);
}

inline std::vector<uint8_t> gen_gaussian_quantized(size_t length, double sigma_sq, double qs,
                                                   uint64_t seed) {
    if (!(sigma_sq > 0.0))
        throw std::invalid_argument("datagen: sigma_sq must be positive");
    if (!(qs > 0.0))
        throw std::invalid_argument("datagen: qs must be positive");
    GaussianSource src(seed);
    double sigma = std::sqrt(sigma_sq);
    std::vector<uint8_t> out(length);
    for (size_t i = 0; i < length; ++i)
        out[i] = quantize_to_byte(src.next() * sigma, qs);
    return out;
}

// First byte uniform; each later byte repeats its predecessor with
// probability p_stay, otherwise a fresh uniform byte is drawn (which may
// coincide with the predecessor).
inline std::vector<uint8_t> gen_markov_correlated(size_t length, double p_stay, uint64_t seed) {
    if (!(p_stay >= 0.0 && p_stay <= 1.0))
        throw std::invalid_argument("datagen: p_stay must lie in [0, 1]");
    std::vector<uint8_t> out(length);
    if (length == 0)
        return out;
    Splitmix64 rng(seed);
    out[0] = rng.next_byte();
    for (size_t i = 1; i < length; ++i) {
        if (rng.next_unit() < p_stay)
            out[i] = out[i - 1];
        else
            out[i] = rng.next_byte();
    }
    return out;
}

struct GrayImage {
    size_t width = 0;
    size_t height = 0;
    std::vector<uint8_t> pixels;  // row-major
};

// Binary PGM (P5), 8-bit maxval only. '#' comments in the header are skipped.
inline GrayImage load_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("datagen: cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    size_t pos = 0;
    auto skip_space = [&] {
        while (pos < data.size()) {
            char c = data[pos];
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n')
                    ++pos;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto next_int = [&]() -> uint64_t {
        skip_space();
        if (pos >= data.size() || data[pos] < '0' || data[pos] > '9')
            throw std::runtime_error("datagen: malformed PGM header in " + path);
        uint64_t v = 0;
        while (pos < data.size() && data[pos] >= '0' && data[pos] <= '9')
            v = v * 10 + static_cast<uint64_t>(data[pos++] - '0');
        return v;
    };

    if (data.size() < 2 || data[0] != 'P' || data[1] != '5')
        throw std::runtime_error("datagen: not a binary PGM (P5): " + path);
    pos = 2;
    uint64_t w = next_int();
    uint64_t h = next_int();
    uint64_t maxval = next_int();
    if (w == 0 || h == 0)
        throw std::runtime_error("datagen: PGM has zero dimension: " + path);
    if (maxval == 0 || maxval > 255)
        throw std::runtime_error("datagen: only 8-bit PGM supported: " + path);
    ++pos;  // the single whitespace byte after maxval
    if (data.size() - pos < w * h)
        throw std::runtime_error("datagen: PGM raster truncated: " + path);

    GrayImage img;
    img.width = static_cast<size_t>(w);
    img.height = static_cast<size_t>(h);
    img.pixels.assign(data.begin() + static_cast<ptrdiff_t>(pos),
                      data.begin() + static_cast<ptrdiff_t>(pos + w * h));
    return img;
}

inline std::array<std::array<double, 8>, 8> dct_basis() {
    std::array<std::array<double, 8>, 8> a;
    for (int k = 0; k < 8; ++k) {
        double alpha = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
        for (int n = 0; n < 8; ++n)
            a[k][n] = alpha * std::cos(std::numbers::pi * (2 * n + 1) * k / 16.0);
    }
    return a;
}

// 8x8 orthonormal DCT-II of (pixel - 128) blocks, quantized like the
// gaussian generator and emitted row-major per block, blocks in image
// row-major order. Output is the largest multiple of 64 <= length; the
// block walk wraps around if the image runs out before that.
inline std::vector<uint8_t> gen_dct_blocks(const GrayImage& img, double qs, size_t length) {
    if (!(qs > 0.0))
        throw std::invalid_argument("datagen: qs must be positive");
    size_t bx = img.width / 8;
    size_t by = img.height / 8;
    if (bx == 0 || by == 0)
        throw std::invalid_argument("datagen: image too small for 8x8 blocks");
    if (img.pixels.size() != img.width * img.height)
        throw std::invalid_argument("datagen: image pixel buffer size mismatch");

    const auto basis = dct_basis();
    std::vector<uint8_t> out;
    out.reserve((length / 64) * 64);
    size_t n_blocks_needed = length / 64;
    size_t block = 0;
    for (size_t emitted = 0; emitted < n_blocks_needed; ++emitted, ++block) {
        size_t b = block % (bx * by);
        size_t px = (b % bx) * 8;
        size_t py = (b / bx) * 8;
        double x[8][8];
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c)
                x[r][c] = static_cast<double>(img.pixels[(py + r) * img.width + (px + c)]) - 128.0;
        double tmp[8][8];
        for (int k = 0; k < 8; ++k)
            for (int c = 0; c < 8; ++c) {
                double s = 0.0;
                for (int m = 0; m < 8; ++m)
                    s += basis[k][m] * x[m][c];
                tmp[k][c] = s;
            }
        for (int k = 0; k < 8; ++k)
            for (int l = 0; l < 8; ++l) {
                double s = 0.0;
                for (int n = 0; n < 8; ++n)
                    s += tmp[k][n] * basis[l][n];
                out.push_back(quantize_to_byte(s, qs));
            }
    }
    return out;
}

enum class GenKind { gaussian, markov, dct };

struct GenSpec {
    GenKind kind = GenKind::gaussian;
    size_t length = 0;
    uint64_t seed = 0;
    double sigma_sq = 25.0;
    double qs = 1.0;
    double p_stay = 0.9;
    std::string source_image;
};

inline std::vector<uint8_t> generate(const GenSpec& spec) {
    switch (spec.kind) {
        case GenKind::gaussian:
            return gen_gaussian_quantized(spec.length, spec.sigma_sq, spec.qs, spec.seed);
        case GenKind::markov:
            return gen_markov_correlated(spec.length, spec.p_stay, spec.seed);
        case GenKind::dct: {
            if (spec.source_image.empty())
                throw std::invalid_argument("datagen: dct generator needs a source image");
            return gen_dct_blocks(load_pgm(spec.source_image), spec.qs, spec.length);
        }
    }
    throw std::invalid_argument("datagen: unknown generator kind");
}

}  // namespace rcgs
