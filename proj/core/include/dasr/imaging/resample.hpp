#pragma once

#include <vector>

#include "dasr/imaging/image.hpp"

namespace dasr {

// Exact rational scale factor num/den.
struct ScaleFactor {
  int num = 1;
  int den = 1;

  double value() const { return static_cast<double>(num) / den; }
  int apply(int n) const { return static_cast<int>((static_cast<long long>(n) * num) / den); }
};

// One source sample contributing to an output sample.
struct Tap {
  int index;
  double weight;
};

// Per-output-sample taps of a 1-D linear resampler.
using ResampleTaps = std::vector<std::vector<Tap>>;

// Keys cubic convolution kernel; a = -0.5 is Catmull-Rom.
double cubic_kernel(double x, double a = -0.5);

// Antialiased bicubic taps for in_size -> out_size at the given scale. When
// downscaling the kernel is stretched by 1/scale. Border samples are clamped.
ResampleTaps bicubic_taps(int in_size, int out_size, ScaleFactor scale);

// Corner-aligned bilinear taps: output sample i reads source position
// i * (in - 1) / (out - 1).
ResampleTaps bilinear_taps(int in_size, int out_size);

// Applies separable taps (rows first, then columns) to every channel.
Image apply_separable(const Image& img, const ResampleTaps& rows, const ResampleTaps& cols);

// Output dims floor(H * scale) x floor(W * scale).
Image bicubic_resize(const Image& img, ScaleFactor scale);
Image bilinear_resize(const Image& img, int target_h, int target_w);

}  // namespace dasr
