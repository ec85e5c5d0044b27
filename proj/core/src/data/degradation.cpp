#include "dasr/data/degradation.hpp"

#include <cmath>

#include "dasr/error.hpp"
#include "dasr/imaging/filter.hpp"
#include "dasr/imaging/resample.hpp"

namespace dasr::data {

void DegradationSpec::validate() const {
  DASR_REQUIRE(blur_sigma >= 0.0 && std::isfinite(blur_sigma), "degradation: blur_sigma must be >= 0");
  DASR_REQUIRE(noise_sigma >= 0.0 && std::isfinite(noise_sigma), "degradation: noise_sigma must be >= 0");
  DASR_REQUIRE(!jpeg_quality || (*jpeg_quality >= 10 && *jpeg_quality <= 100),
               "degradation: compression_quality must be in [10, 100]");
  DASR_REQUIRE(scale == 1 || scale == 2 || scale == 4, "degradation: scale must be 1, 2 or 4");
}

void to_json(nlohmann::json& j, const DegradationSpec& s) {
  j = {{"blur_sigma", s.blur_sigma},
       {"noise_sigma", s.noise_sigma},
       {"compression_quality", s.jpeg_quality ? *s.jpeg_quality : 0},
       {"scale", s.scale},
       {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, DegradationSpec& s) {
  j.at("blur_sigma").get_to(s.blur_sigma);
  j.at("noise_sigma").get_to(s.noise_sigma);
  const int q = j.at("compression_quality").get<int>();
  s.jpeg_quality = q > 0 ? std::optional<int>(q) : std::nullopt;
  j.at("scale").get_to(s.scale);
  j.at("seed").get_to(s.seed);
}

Image simulate_degradation(const Image& hr, const DegradationSpec& spec) {
  spec.validate();
  require_valid_image(hr, "simulate_degradation");
  if (hr.height() % spec.scale != 0 || hr.width() % spec.scale != 0)
    throw InvalidArgument("simulate_degradation: HR dims not divisible by scale");
  Image x = spec.blur_sigma > 0.0 ? gaussian_blur(hr, spec.blur_sigma) : hr;
  Image lr = spec.scale == 1 ? x : bicubic_resize(x, {1, spec.scale});
  if (spec.noise_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (double& v : lr.values()) v += noise(rng);
  }
  if (spec.jpeg_quality) return jpeg_roundtrip(lr, *spec.jpeg_quality);
  if (spec.blur_sigma == 0.0 && spec.noise_sigma == 0.0) return lr;
  return lr.clamped();
}

}  // namespace dasr::data
