#include "seamweld/image.hpp"

#include <algorithm>
#include <cmath>

#include "seamweld/png_io.hpp"
#include "seamweld/runtime.hpp"

namespace seamweld {

namespace {

// Alpha threshold for mask binarization; antialiased warp edges fall on
// either side deterministically.
constexpr uint8_t kAlphaCut = 128; // alpha/255 > 0.5

void to_image_and_mask(const png::Rgba8& in, Image& img, ValidityMask& mask) {
    img = Image(in.width, in.height, 3);
    mask = ValidityMask(in.width, in.height);
    const size_t n = img.pixel_count();
    for (size_t i = 0; i < n; ++i) {
        const uint8_t* px = in.data.data() + i * 4;
        const bool valid = px[3] >= kAlphaCut;
        mask.bits[i] = valid ? 1 : 0;
        if (valid) {
            img.data[i * 3 + 0] = px[0] / 255.0f;
            img.data[i * 3 + 1] = px[1] / 255.0f;
            img.data[i * 3 + 2] = px[2] / 255.0f;
        }
    }
}

} // namespace

AlignedPair load_aligned_pair(const std::string& path_target, const std::string& path_reference) {
    bool alpha_t = false, alpha_r = false;
    png::Rgba8 raw_t = png::read_rgba8(path_target, alpha_t);
    png::Rgba8 raw_r = png::read_rgba8(path_reference, alpha_r);
    if (!alpha_t) raise(ErrorKind::InvalidInput, "'" + path_target + "' has no alpha channel");
    if (!alpha_r) raise(ErrorKind::InvalidInput, "'" + path_reference + "' has no alpha channel");
    if (raw_t.width != raw_r.width || raw_t.height != raw_r.height)
        raise(ErrorKind::DimensionMismatch,
              "canvas size mismatch: " + std::to_string(raw_t.width) + "x" + std::to_string(raw_t.height) +
              " vs " + std::to_string(raw_r.width) + "x" + std::to_string(raw_r.height));

    AlignedPair pair;
    to_image_and_mask(raw_t, pair.target, pair.target_mask);
    to_image_and_mask(raw_r, pair.reference, pair.reference_mask);

    ValidityMask overlap = compute_overlap(pair);
    if (overlap.count() == 0)
        raise(ErrorKind::EmptyOverlap, "the two images never overlap");
    return pair;
}

ValidityMask compute_overlap(const AlignedPair& pair) {
    ValidityMask out(pair.width(), pair.height());
    const size_t n = out.bits.size();
    for (size_t i = 0; i < n; ++i)
        out.bits[i] = pair.target_mask.bits[i] & pair.reference_mask.bits[i];
    return out;
}

Image luminance(const Image& image) {
    if (image.channels == 1) return image;
    Image out(image.width, image.height, 1);
    const size_t n = image.pixel_count();
    const int nt = runtime::max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < (long long)n; ++i) {
        const float* px = image.data.data() + size_t(i) * 3;
        float y = 0.299f * px[0] + 0.587f * px[1] + 0.114f * px[2];
        out.data[i] = std::clamp(y, 0.0f, 1.0f);
    }
    return out;
}

std::optional<Rgb> bilinear_sample(const Image& image, const ValidityMask& mask, double x, double y) {
    // Border clamp, including fully outside coordinates.
    x = std::clamp(x, 0.0, double(image.width - 1));
    y = std::clamp(y, 0.0, double(image.height - 1));

    const int x0 = int(std::floor(x));
    const int y0 = int(std::floor(y));
    const int x1 = std::min(x0 + 1, image.width - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;

    const double w00 = (1 - fx) * (1 - fy);
    const double w10 = fx * (1 - fy);
    const double w01 = (1 - fx) * fy;
    const double w11 = fx * fy;

    const int xs[4] = {x0, x1, x0, x1};
    const int ys[4] = {y0, y0, y1, y1};
    const double ws[4] = {w00, w10, w01, w11};

    Rgb out;
    double acc[3] = {0, 0, 0};
    for (int k = 0; k < 4; ++k) {
        if (ws[k] == 0.0) continue;
        if (!mask.at(xs[k], ys[k])) return std::nullopt;
        for (int c = 0; c < image.channels; ++c)
            acc[c] += ws[k] * image.at(xs[k], ys[k], c);
    }
    out.r = float(acc[0]);
    out.g = float(image.channels == 3 ? acc[1] : acc[0]);
    out.b = float(image.channels == 3 ? acc[2] : acc[0]);
    return out;
}

Image crop(const Image& image, const Rect& rect) {
    if (rect.x0 < 0 || rect.y0 < 0 || rect.x1 > image.width || rect.y1 > image.height ||
        rect.empty())
        raise(ErrorKind::InvalidInput, "crop rect outside the image");
    Image out(rect.width(), rect.height(), image.channels);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            for (int c = 0; c < image.channels; ++c)
                out.at(x, y, c) = image.at(rect.x0 + x, rect.y0 + y, c);
    return out;
}

void write_image(const Image& image, const std::string& path) {
    const size_t n = image.pixel_count();
    auto to_byte = [](float v) {
        return uint8_t(std::clamp(std::lround(v * 255.0f), 0L, 255L));
    };
    if (image.channels == 1) {
        std::vector<uint8_t> gray(n);
        for (size_t i = 0; i < n; ++i) gray[i] = to_byte(image.data[i]);
        png::write_gray8(path, image.width, image.height, gray);
        return;
    }
    std::vector<uint8_t> rgb(n * 3);
    for (size_t i = 0; i < n * 3; ++i) rgb[i] = to_byte(image.data[i]);
    png::write_rgb8(path, image.width, image.height, rgb);
}

} // namespace seamweld
