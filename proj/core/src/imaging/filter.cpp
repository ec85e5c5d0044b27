#include "dasr/imaging/filter.hpp"

#include <cmath>

#include "dasr/error.hpp"

namespace dasr {

int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

std::vector<double> gaussian_kernel(double sigma) {
  DASR_REQUIRE(sigma > 0.0 && std::isfinite(sigma), "gaussian: sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += k[i + radius];
  }
  for (double& v : k) v /= total;
  return k;
}

Image gaussian_blur(const Image& img, double sigma) {
  require_valid_image(img, "gaussian_blur");
  const std::vector<double> k = gaussian_kernel(sigma);
  const int r = static_cast<int>(k.size() / 2);
  const int h = img.height();
  const int w = img.width();
  Image tmp(h, w, img.channels());
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int d = -r; d <= r; ++d) acc += k[d + r] * img.at(c, y, reflect_index(x + d, w));
        tmp.at(c, y, x) = acc;
      }
  Image out(h, w, img.channels());
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int d = -r; d <= r; ++d) acc += k[d + r] * tmp.at(c, reflect_index(y + d, h), x);
        out.at(c, y, x) = acc;
      }
  return out;
}

Image gaussian_highfreq(const Image& img, double sigma) {
  Image blurred = gaussian_blur(img, sigma);
  Image out = img;
  auto dst = out.values();
  auto src = blurred.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
  return out;
}

}  // namespace dasr
