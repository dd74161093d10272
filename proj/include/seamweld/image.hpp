#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seamweld/error.hpp"
#include "seamweld/geometry.hpp"

namespace seamweld {

/// Row-major float image, intensities in [0,1], 1 (gray) or 3 (RGB) channels.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<float> data;

    Image() = default;
    Image(int w, int h, int c) : width(w), height(h), channels(c), data(size_t(w) * h * c, 0.0f) {}

    float& at(int x, int y, int c = 0) { return data[(size_t(y) * width + x) * channels + c]; }
    float at(int x, int y, int c = 0) const { return data[(size_t(y) * width + x) * channels + c]; }

    size_t pixel_count() const { return size_t(width) * height; }
};

/// One boolean per pixel: true where the pixel holds real content, not canvas padding.
struct ValidityMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;

    ValidityMask() = default;
    ValidityMask(int w, int h, bool value = false)
        : width(w), height(h), bits(size_t(w) * h, value ? 1 : 0) {}

    bool at(int x, int y) const { return bits[size_t(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[size_t(y) * width + x] = v ? 1 : 0; }

    size_t count() const {
        size_t n = 0;
        for (uint8_t b : bits) n += b;
        return n;
    }
};

/// Two pre-aligned images sharing one canvas, each with its coverage mask.
struct AlignedPair {
    Image target;              // composited where label = 0
    ValidityMask target_mask;
    Image reference;           // composited where label = 1
    ValidityMask reference_mask;

    int width() const { return target.width; }
    int height() const { return target.height; }
};

struct Rgb {
    float r = 0, g = 0, b = 0;
};

/// Load two RGBA PNGs into an AlignedPair. Alpha > 0.5 becomes mask=true,
/// color under mask=false is zeroed. Throws DimensionMismatch, IoFailure,
/// InvalidInput (no alpha) or EmptyOverlap.
AlignedPair load_aligned_pair(const std::string& path_target, const std::string& path_reference);

/// Pointwise AND of the two coverage masks.
ValidityMask compute_overlap(const AlignedPair& pair);

/// Rec.601 luma, clamped to [0,1]. Gray input is returned unchanged.
Image luminance(const Image& image);

/// Bilinear sample with border clamp. Returns nullopt when any neighbor with
/// nonzero weight is masked out.
std::optional<Rgb> bilinear_sample(const Image& image, const ValidityMask& mask, double x, double y);

/// Copy of the pixels inside rect, which must lie within the image.
Image crop(const Image& image, const Rect& rect);

/// 8-bit RGB PNG (1-channel images are written as 8-bit gray).
void write_image(const Image& image, const std::string& path);

} // namespace seamweld
