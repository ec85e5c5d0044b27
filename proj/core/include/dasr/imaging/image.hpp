#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dasr {

// Planar (channel-major) floating point raster. Pixel values are nominally in
// [0, 1]; intermediate results may leave that range.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t pixels() const { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<double> plane(int c) { return {data_.data() + c * pixels(), pixels()}; }
  std::span<const double> plane(int c) const { return {data_.data() + c * pixels(), pixels()}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
  }
  bool all_finite() const;

  // Rectangular crop, all channels.
  Image crop(int y0, int x0, int h, int w) const;
  Image flipped_horizontal() const;
  Image clamped(double lo = 0.0, double hi = 1.0) const;

  friend bool operator==(const Image& a, const Image& b) {
    return a.same_shape(b) && a.data_ == b.data_;
  }

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

void require_valid_image(const Image& img, const char* what);

}  // namespace dasr
