#include "dasr/evaluation/metrics.hpp"

#include <cmath>

#include "dasr/error.hpp"
#include "dasr/nn/ops.hpp"

namespace dasr::evaluation {

namespace {
void require_same(const Image& a, const Image& b, const char* what) {
  require_valid_image(a, what);
  require_valid_image(b, what);
  if (!a.same_shape(b)) throw InvalidArgument(std::string(what) + ": image shapes differ");
}
}  // namespace

double mse(const Image& a, const Image& b) {
  require_same(a, b, "mse");
  const auto va = a.values();
  const auto vb = b.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    acc += d * d;
  }
  return acc / static_cast<double>(va.size());
}

double psnr_from_mse(double m) {
  DASR_REQUIRE(m >= 0.0 && std::isfinite(m), "psnr: mse must be finite and >= 0");
  if (m == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, -10.0 * std::log10(m));
}

double psnr(const Image& a, const Image& b) { return psnr_from_mse(mse(a, b)); }

Image luma(const Image& img) {
  if (img.channels() == 1) return img;
  DASR_REQUIRE(img.channels() == 3, "luma: expected 1 or 3 channels");
  Image y(img.height(), img.width(), 1);
  const auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  auto out = y.plane(0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  return y;
}

namespace {

// Valid-mode separable correlation with a normalized 1-D kernel.
std::vector<double> filter_valid(const std::vector<double>& img, int h, int w,
                                 const std::vector<double>& k) {
  const int n = static_cast<int>(k.size());
  const int ow = w - n + 1, oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[i] * img[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  return out;
}

}  // namespace

double ssim(const Image& a, const Image& b, const SsimParams& p) {
  require_same(a, b, "ssim");
  DASR_REQUIRE(p.window >= 1 && p.sigma > 0.0, "ssim: invalid window");
  if (a.height() < p.window || a.width() < p.window)
    throw InvalidArgument("ssim: image smaller than the " + std::to_string(p.window) + "x" +
                          std::to_string(p.window) + " window");
  const Image la = luma(a), lb = luma(b);
  const int h = la.height(), w = la.width();

  std::vector<double> k(p.window);
  double ks = 0.0;
  const double c = (p.window - 1) / 2.0;
  for (int i = 0; i < p.window; ++i) {
    k[i] = std::exp(-((i - c) * (i - c)) / (2.0 * p.sigma * p.sigma));
    ks += k[i];
  }
  for (double& v : k) v /= ks;

  std::vector<double> x(la.values().begin(), la.values().end());
  std::vector<double> y(lb.values().begin(), lb.values().end());
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter_valid(x, h, w, k), my = filter_valid(y, h, w, k);
  const auto sxx = filter_valid(xx, h, w, k), syy = filter_valid(yy, h, w, k);
  const auto sxy = filter_valid(xy, h, w, k);
  const double c1 = (p.k1 * 1.0) * (p.k1 * 1.0);
  const double c2 = (p.k2 * 1.0) * (p.k2 * 1.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cv = sxy[i] - mx[i] * my[i];
    acc += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cv + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return acc / static_cast<double>(mx.size());
}

FeatureDistance::FeatureDistance(std::unique_ptr<models::FeatureExtractor> phi, std::string name)
    : phi_(std::move(phi)), name_(std::move(name)) {
  DASR_REQUIRE(phi_ != nullptr, "FeatureDistance needs an extractor");
  phi_->set_trainable(false);
}

double FeatureDistance::distance(const Image& a, const Image& b) {
  require_same(a, b, "perceptual distance");
  const nn::Tensor fa = phi_->infer(nn::image_tensor(a));
  const nn::Tensor fb = phi_->infer(nn::image_tensor(b));
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.numel(); ++i) acc += std::abs(fa[i] - fb[i]);
  return acc / static_cast<double>(fa.numel());
}

}  // namespace dasr::evaluation
