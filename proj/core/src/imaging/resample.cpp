#include "dasr/imaging/resample.hpp"

#include <algorithm>
#include <cmath>

#include "dasr/error.hpp"

namespace dasr {

double cubic_kernel(double x, double a) {
  const double t = std::abs(x);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

namespace {

// Merge taps that hit the same clamped index and drop exact zeros so the
// weight lists stay short and deterministic.
std::vector<Tap> compact(std::vector<Tap> taps) {
  std::sort(taps.begin(), taps.end(), [](const Tap& a, const Tap& b) { return a.index < b.index; });
  std::vector<Tap> out;
  for (const Tap& t : taps) {
    if (!out.empty() && out.back().index == t.index)
      out.back().weight += t.weight;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const Tap& t) { return t.weight == 0.0; });
  return out;
}

}  // namespace

ResampleTaps bicubic_taps(int in_size, int out_size, ScaleFactor scale) {
  DASR_REQUIRE(in_size >= 1 && out_size >= 1, "bicubic: degenerate size");
  DASR_REQUIRE(scale.num > 0 && scale.den > 0, "bicubic: scale must be positive");
  const double s = scale.value();
  const bool shrink = s < 1.0;
  const double support = shrink ? 2.0 / s : 2.0;
  ResampleTaps taps(out_size);
  for (int i = 0; i < out_size; ++i) {
    // Half-pixel centers: output center i + 0.5 maps to input (i + 0.5) / s.
    const double u = (i + 0.5) * scale.den / scale.num - 0.5;
    const int first = static_cast<int>(std::floor(u - support));
    const int last = static_cast<int>(std::ceil(u + support));
    std::vector<Tap> raw;
    double total = 0.0;
    for (int j = first; j <= last; ++j) {
      const double w = shrink ? s * cubic_kernel(s * (u - j)) : cubic_kernel(u - j);
      if (w == 0.0) continue;
      raw.push_back({std::clamp(j, 0, in_size - 1), w});
      total += w;
    }
    for (Tap& t : raw) t.weight /= total;
    taps[i] = compact(std::move(raw));
  }
  return taps;
}

ResampleTaps bilinear_taps(int in_size, int out_size) {
  DASR_REQUIRE(in_size >= 1 && out_size >= 1, "bilinear: degenerate size");
  ResampleTaps taps(out_size);
  for (int i = 0; i < out_size; ++i) {
    double src;
    if (in_size == 1)
      src = 0.0;
    else if (out_size == 1)
      src = (in_size - 1) / 2.0;
    else
      src = static_cast<double>(i) * (in_size - 1) / (out_size - 1);
    const int i0 = std::min(static_cast<int>(std::floor(src)), in_size - 1);
    const double f = src - i0;
    if (f == 0.0)
      taps[i] = {{i0, 1.0}};
    else
      taps[i] = {{i0, 1.0 - f}, {i0 + 1, f}};
  }
  return taps;
}

Image apply_separable(const Image& img, const ResampleTaps& rows, const ResampleTaps& cols) {
  const int h = img.height();
  const int oh = static_cast<int>(rows.size());
  const int ow = static_cast<int>(cols.size());
  Image tmp(h, ow, img.channels());
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < ow; ++x) {
        double acc = 0.0;
        for (const Tap& t : cols[x]) acc += t.weight * img.at(c, y, t.index);
        tmp.at(c, y, x) = acc;
      }
  Image out(oh, ow, img.channels());
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < oh; ++y)
      for (int x = 0; x < ow; ++x) {
        double acc = 0.0;
        for (const Tap& t : rows[y]) acc += t.weight * tmp.at(c, t.index, x);
        out.at(c, y, x) = acc;
      }
  return out;
}

Image bicubic_resize(const Image& img, ScaleFactor scale) {
  require_valid_image(img, "bicubic_resize");
  DASR_REQUIRE(scale.num > 0 && scale.den > 0, "bicubic_resize: scale must be positive");
  const int oh = scale.apply(img.height());
  const int ow = scale.apply(img.width());
  DASR_REQUIRE(oh >= 1 && ow >= 1, "bicubic_resize: degenerate output size");
  return apply_separable(img, bicubic_taps(img.height(), oh, scale),
                         bicubic_taps(img.width(), ow, scale));
}

Image bilinear_resize(const Image& img, int target_h, int target_w) {
  DASR_REQUIRE(!img.empty(), "bilinear_resize: empty image");
  DASR_REQUIRE(target_h >= 1 && target_w >= 1, "bilinear_resize: degenerate target size");
  if (target_h == img.height() && target_w == img.width()) return img;
  return apply_separable(img, bilinear_taps(img.height(), target_h),
                         bilinear_taps(img.width(), target_w));
}

}  // namespace dasr
