#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace seamweld::png {

struct Rgba8 {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data; // 4 bytes per pixel, row-major
};

/// Decode any PNG to 8-bit RGBA. `had_alpha` reports whether the file itself
/// carried alpha information (alpha channel or tRNS).
Rgba8 read_rgba8(const std::string& path, bool& had_alpha);

void write_rgb8(const std::string& path, int width, int height, const std::vector<uint8_t>& rgb);
void write_gray8(const std::string& path, int width, int height, const std::vector<uint8_t>& gray);
void write_rgba8(const std::string& path, int width, int height, const std::vector<uint8_t>& rgba);

/// Decode a PNG to 8-bit gray (single channel, alpha ignored).
std::vector<uint8_t> read_gray8(const std::string& path, int& width, int& height);

} // namespace seamweld::png
