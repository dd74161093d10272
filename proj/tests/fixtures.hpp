#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "seamweld/error.hpp"
#include "seamweld/image.hpp"
#include "seamweld/png_io.hpp"

namespace fixtures {

using namespace seamweld;

// Smooth deterministic texture: a few random sinusoids per channel plus
// mild value noise, rescaled into [0.05, 0.95].
inline Image smooth_texture(int w, int h, uint32_t seed, int channels = 3,
                            double noise_amp = 0.05, double cycles = 3.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uf(0.0, 1.0);
    Image img(w, h, channels);
    for (int c = 0; c < channels; ++c) {
        struct Wave {
            double fx, fy, phase, amp;
        };
        Wave waves[6];
        for (Wave& wv : waves) {
            wv.fx = (uf(rng) * 2.0 - 1.0) * cycles * 2.0 * 3.14159265358979 / w;
            wv.fy = (uf(rng) * 2.0 - 1.0) * cycles * 2.0 * 3.14159265358979 / h;
            wv.phase = uf(rng) * 6.28318530717959;
            wv.amp = 0.5 + uf(rng);
        }
        std::vector<double> vals(size_t(w) * h);
        double lo = 1e30, hi = -1e30;
        std::uniform_real_distribution<double> noise(-noise_amp, noise_amp);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double s = noise(rng);
                for (const Wave& wv : waves) s += wv.amp * std::sin(wv.fx * x + wv.fy * y + wv.phase);
                vals[size_t(y) * w + x] = s;
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
        }
        double scale = hi > lo ? 0.9 / (hi - lo) : 0.0;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                img.at(x, y, c) = float(0.05 + (vals[size_t(y) * w + x] - lo) * scale);
    }
    return img;
}

// Left/right pair on one canvas: the target covers [0, target_end), the
// reference [ref_begin, width), both drawn from one base texture so the
// overlap corridor agrees everywhere except `block`, where the reference
// content is shifted by (dx, dy). Ground truth: sampling the target at
// p + (dx, dy) reproduces the reference inside the block.
struct ShiftSpec {
    int width = 400, height = 300;
    int target_end = 212;
    int ref_begin = 182;
    Rect block{182, 120, 242, 180};
    int dx = 5, dy = 0;
    uint32_t seed = 7;
    double noise = 0.05;
    double cycles = 3.0;
};

inline AlignedPair shifted_pair(const ShiftSpec& spec) {
    Image base = smooth_texture(spec.width, spec.height, spec.seed, 3, spec.noise, spec.cycles);
    AlignedPair pair;
    pair.target = Image(spec.width, spec.height, 3);
    pair.reference = Image(spec.width, spec.height, 3);
    pair.target_mask = ValidityMask(spec.width, spec.height, false);
    pair.reference_mask = ValidityMask(spec.width, spec.height, false);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            if (x < spec.target_end) {
                pair.target_mask.set(x, y, true);
                for (int c = 0; c < 3; ++c) pair.target.at(x, y, c) = base.at(x, y, c);
            }
            if (x >= spec.ref_begin) {
                pair.reference_mask.set(x, y, true);
                int sx = x, sy = y;
                if (spec.block.contains(x, y)) {
                    sx = std::min(x + spec.dx, spec.width - 1);
                    sy = std::min(y + spec.dy, spec.height - 1);
                }
                for (int c = 0; c < 3; ++c) pair.reference.at(x, y, c) = base.at(sx, sy, c);
            }
        }
    }
    return pair;
}

// Same geometry with no disturbed block: the overlap agrees exactly.
inline AlignedPair clean_pair(int width = 200, int height = 120, uint32_t seed = 3) {
    ShiftSpec spec;
    spec.width = width;
    spec.height = height;
    spec.target_end = width * 53 / 100;
    spec.ref_begin = width * 45 / 100;
    spec.block = Rect{0, 0, 0, 0};
    spec.seed = seed;
    return shifted_pair(spec);
}

inline void write_pair_png(const AlignedPair& pair, const std::string& target_path,
                           const std::string& reference_path) {
    auto encode = [](const Image& img, const ValidityMask& mask, const std::string& path) {
        std::vector<uint8_t> rgba(size_t(img.width) * img.height * 4);
        auto to_byte = [](float v) {
            v = std::min(std::max(v, 0.0f), 1.0f);
            return uint8_t(std::lround(v * 255.0f));
        };
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                size_t o = (size_t(y) * img.width + x) * 4;
                rgba[o + 0] = to_byte(img.at(x, y, 0));
                rgba[o + 1] = to_byte(img.at(x, y, 1));
                rgba[o + 2] = to_byte(img.at(x, y, 2));
                rgba[o + 3] = mask.at(x, y) ? 255 : 0;
            }
        }
        png::write_rgba8(path, img.width, img.height, rgba);
    };
    encode(pair.target, pair.target_mask, target_path);
    encode(pair.reference, pair.reference_mask, reference_path);
}

// Fresh directory under the system temp root; leaked on purpose so a failing
// test leaves its artifacts behind for inspection.
inline std::string make_temp_dir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "seamweld-test-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
    return std::string(buf.data());
}

// Runs f and reports which ErrorKind it threw, if any.
template <class F>
inline std::optional<ErrorKind> thrown_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

} // namespace fixtures
