#pragma once

#include <filesystem>

#include "dasr/imaging/image.hpp"

namespace dasr {

// 8-bit PNG, gray or RGB. Bytes map to value / 255. Images with alpha are
// flattened to their color channels.
Image load_image(const std::filesystem::path& path);

// Values are clamped to [0, 1] and rounded half-up to bytes.
void save_image(const Image& img, const std::filesystem::path& path);

unsigned char quantize_to_byte(double v);

// Equivalent to save_image followed by load_image, without touching disk.
Image quantize_8bit(const Image& img);

}  // namespace dasr
