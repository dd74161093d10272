#include "seamweld/png_io.hpp"

#include <cstdio>
#include <memory>

#include <png.h>

#include "seamweld/error.hpp"

namespace seamweld::png {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct ReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~ReadCtx() { if (png) png_destroy_read_struct(&png, &info, nullptr); }
};

struct WriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~WriteCtx() { if (png) png_destroy_write_struct(&png, &info); }
};

} // namespace

Rgba8 read_rgba8(const std::string& path, bool& had_alpha) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) raise(ErrorKind::IoFailure, "cannot open '" + path + "' for reading");

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        raise(ErrorKind::InvalidInput, "'" + path + "' is not a PNG file");

    ReadCtx ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) raise(ErrorKind::Internal, "png_create_read_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) raise(ErrorKind::Internal, "png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png)))
        raise(ErrorKind::InvalidInput, "failed to decode '" + path + "'");

    png_init_io(ctx.png, f.get());
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_byte color_type = png_get_color_type(ctx.png, ctx.info);
    const bool has_trns = png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS) != 0;
    had_alpha = (color_type & PNG_COLOR_MASK_ALPHA) != 0 || has_trns;

    // Normalize everything to 8-bit RGBA.
    png_set_expand(ctx.png);
    if (png_get_bit_depth(ctx.png, ctx.info) == 16) png_set_strip_16(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(ctx.png);
    png_set_filler(ctx.png, 0xFF, PNG_FILLER_AFTER);
    png_read_update_info(ctx.png, ctx.info);

    Rgba8 out;
    out.width = int(png_get_image_width(ctx.png, ctx.info));
    out.height = int(png_get_image_height(ctx.png, ctx.info));
    if (png_get_rowbytes(ctx.png, ctx.info) != size_t(out.width) * 4)
        raise(ErrorKind::Internal, "unexpected PNG row size for '" + path + "'");

    out.data.resize(size_t(out.width) * out.height * 4);
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y)
        rows[y] = out.data.data() + size_t(y) * out.width * 4;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);
    return out;
}

static void write_png(const std::string& path, int width, int height, int channels,
                      const std::vector<uint8_t>& data) {
    if (width <= 0 || height <= 0 || data.size() != size_t(width) * height * channels)
        raise(ErrorKind::Internal, "PNG write buffer size mismatch");

    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) raise(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");

    WriteCtx ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png) raise(ErrorKind::Internal, "png_create_write_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) raise(ErrorKind::Internal, "png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png)))
        raise(ErrorKind::IoFailure, "failed to write '" + path + "'");

    png_init_io(ctx.png, f.get());
    const int color = channels == 4   ? PNG_COLOR_TYPE_RGBA
                      : channels == 3 ? PNG_COLOR_TYPE_RGB
                                      : PNG_COLOR_TYPE_GRAY;
    png_set_IHDR(ctx.png, ctx.info, width, height, 8, color,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);

    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(data.data() + size_t(y) * width * channels);
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

void write_rgb8(const std::string& path, int width, int height, const std::vector<uint8_t>& rgb) {
    write_png(path, width, height, 3, rgb);
}

void write_gray8(const std::string& path, int width, int height, const std::vector<uint8_t>& gray) {
    write_png(path, width, height, 1, gray);
}

void write_rgba8(const std::string& path, int width, int height, const std::vector<uint8_t>& rgba) {
    write_png(path, width, height, 4, rgba);
}

std::vector<uint8_t> read_gray8(const std::string& path, int& width, int& height) {
    bool had_alpha = false;
    Rgba8 img = read_rgba8(path, had_alpha);
    width = img.width;
    height = img.height;
    std::vector<uint8_t> gray(size_t(width) * height);
    for (size_t i = 0; i < gray.size(); ++i) {
        // Files written by us are true gray; average guards imports.
        unsigned v = img.data[i * 4] + img.data[i * 4 + 1] + img.data[i * 4 + 2];
        gray[i] = uint8_t(v / 3);
    }
    return gray;
}

} // namespace seamweld::png
