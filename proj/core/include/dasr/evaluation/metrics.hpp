#pragma once

#include <memory>
#include <string>

#include "dasr/imaging/image.hpp"
#include "dasr/models/networks.hpp"

namespace dasr::evaluation {

// Returned for identical images.
inline constexpr double kPsnrCap = 100.0;

double mse(const Image& a, const Image& b);
// 10 log10(1 / MSE), peak 1.
double psnr(const Image& a, const Image& b);
double psnr_from_mse(double mse);

// BT.601 luma for 3-channel images; single-channel images pass through.
Image luma(const Image& img);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

// Single-scale SSIM on luma, Gaussian window, mean over valid windows only.
double ssim(const Image& a, const Image& b, const SsimParams& params = {});

// Full-reference perceptual distance. Implementations must satisfy d(a, a) = 0
// and d(a, b) = d(b, a).
class PerceptualDistance {
 public:
  virtual ~PerceptualDistance() = default;
  virtual std::string name() const = 0;
  virtual double distance(const Image& a, const Image& b) = 0;
};

// Mean absolute feature difference under a frozen extractor. Not LPIPS.
class FeatureDistance : public PerceptualDistance {
 public:
  explicit FeatureDistance(std::unique_ptr<models::FeatureExtractor> phi, std::string name = "feature_l1");
  std::string name() const override { return name_; }
  double distance(const Image& a, const Image& b) override;

 private:
  std::unique_ptr<models::FeatureExtractor> phi_;
  std::string name_;
};

}  // namespace dasr::evaluation
