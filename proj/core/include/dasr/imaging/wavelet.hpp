#pragma once

#include "dasr/imaging/image.hpp"

namespace dasr {

// Single-level orthonormal 2-D Haar subbands, each (H/2) x (W/2) x C.
// For every 2x2 block {a, b; c, d}:
//   LL = (a + b + c + d) / 2    LH = (a - b + c - d) / 2
//   HL = (a + b - c - d) / 2    HH = (a - b - c + d) / 2
struct HaarBands {
  Image ll;
  Image lh;
  Image hl;
  Image hh;
};

// High-frequency subbands stacked band-major: channels [0, C) hold LH,
// [C, 2C) hold HL and [2C, 3C) hold HH.
struct SubbandStack {
  Image bands;
  int source_channels = 0;

  int height() const { return bands.height(); }
  int width() const { return bands.width(); }
  int channels() const { return bands.channels(); }
};

HaarBands haar_decompose(const Image& img);
Image haar_reconstruct(const HaarBands& bands);
SubbandStack wavelet_highfreq(const Image& img);

}  // namespace dasr
