#include "dasr/imaging/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dasr/error.hpp"

namespace dasr {

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  DASR_REQUIRE(height >= 1 && width >= 1, "image dims must be >= 1");
  DASR_REQUIRE(channels >= 1, "image must have at least one channel");
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

bool Image::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Image Image::crop(int y0, int x0, int h, int w) const {
  DASR_REQUIRE(y0 >= 0 && x0 >= 0 && h >= 1 && w >= 1 && y0 + h <= height_ && x0 + w <= width_,
               "crop window out of bounds");
  Image out(h, w, channels_);
  for (int c = 0; c < channels_; ++c)
    for (int y = 0; y < h; ++y)
      std::copy_n(&data_[index(c, y0 + y, x0)], w, &out.at(c, y, 0));
  return out;
}

Image Image::flipped_horizontal() const {
  Image out(height_, width_, channels_);
  for (int c = 0; c < channels_; ++c)
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x) out.at(c, y, x) = at(c, y, width_ - 1 - x);
  return out;
}

Image Image::clamped(double lo, double hi) const {
  Image out = *this;
  for (double& v : out.data_) v = std::clamp(v, lo, hi);
  return out;
}

void require_valid_image(const Image& img, const char* what) {
  if (img.empty()) throw InvalidArgument(std::string(what) + ": empty image");
  if (!img.all_finite()) throw InvalidArgument(std::string(what) + ": non-finite input");
}

}  // namespace dasr
