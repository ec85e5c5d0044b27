#include "dasr/nn/tensor.hpp"

#include <algorithm>

#include "dasr/error.hpp"

namespace dasr::nn {

std::string to_string(const Shape& s) {
  return "(" + std::to_string(s.n) + ", " + std::to_string(s.c) + ", " + std::to_string(s.h) +
         ", " + std::to_string(s.w) + ")";
}

Tensor::Tensor(Shape shape, double fill) : shape_(shape), data_(shape.numel(), fill) {
  DASR_REQUIRE(shape.n >= 0 && shape.c >= 0 && shape.h >= 0 && shape.w >= 0,
               "tensor extents must be non-negative");
}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(shape), data_(std::move(values)) {
  DASR_REQUIRE(data_.size() == shape.numel(), "tensor value count does not match shape");
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

double Tensor::item() const {
  DASR_REQUIRE(data_.size() == 1, "item() on non-scalar tensor " + to_string(shape_));
  return data_[0];
}

Tensor stack_images(std::span<const Image> images) {
  DASR_REQUIRE(!images.empty(), "stack_images: empty batch");
  const Image& first = images.front();
  Tensor t({static_cast<int>(images.size()), first.channels(), first.height(), first.width()});
  const std::size_t per = first.size();
  for (std::size_t i = 0; i < images.size(); ++i) {
    DASR_REQUIRE(images[i].same_shape(first), "stack_images: mixed image shapes");
    std::copy(images[i].values().begin(), images[i].values().end(), t.data() + i * per);
  }
  return t;
}

Tensor image_tensor(const Image& img) { return stack_images(std::span<const Image>(&img, 1)); }

Image tensor_image(const Tensor& t, int n) {
  const Shape& s = t.shape();
  DASR_REQUIRE(n >= 0 && n < s.n, "tensor_image: batch index out of range");
  Image img(s.h, s.w, s.c);
  const std::size_t per = static_cast<std::size_t>(s.c) * s.plane();
  std::copy_n(t.data() + n * per, per, img.values().begin());
  return img;
}

std::vector<Image> unstack_images(const Tensor& t) {
  std::vector<Image> out;
  out.reserve(t.shape().n);
  for (int i = 0; i < t.shape().n; ++i) out.push_back(tensor_image(t, i));
  return out;
}

}  // namespace dasr::nn
