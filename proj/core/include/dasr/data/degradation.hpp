#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "dasr/imaging/image.hpp"
#include "json.hpp"

namespace dasr::data {

struct DegradationSpec {
  double blur_sigma = 0.0;   // Gaussian blur on the HR image, 0 disables
  double noise_sigma = 0.0;  // additive Gaussian noise on the LR image, [0, 1] units
  std::optional<int> jpeg_quality;  // [10, 100], empty disables
  int scale = 4;
  std::uint64_t seed = 0;

  void validate() const;
};

void to_json(nlohmann::json& j, const DegradationSpec& s);
void from_json(const nlohmann::json& j, DegradationSpec& s);

// blur -> bicubic 1/scale -> seeded noise -> optional JPEG roundtrip -> clamp.
Image simulate_degradation(const Image& hr, const DegradationSpec& spec);

// Baseline JPEG codec path without entropy coding: 8-bit samples, JFIF
// YCbCr (no chroma subsampling), 8x8 DCT-II, IJG quality-scaled tables.
Image jpeg_roundtrip(const Image& img, int quality);

// IJG quality scaling of a base table entry.
int jpeg_scaled_quant(int base, int quality);

// Procedural "natural-ish" HR content for desk experiments: smooth
// gradients, soft-edged shapes, oriented sinusoidal textures and fine grain.
Image synthesize_hr_image(std::mt19937_64& rng, int height, int width, int channels = 3);

}  // namespace dasr::data
