#include "dasr/error.hpp"
#include "dasr/models/networks.hpp"

namespace dasr::models {

Critic::Critic(FreqSep mode, double gaussian_sigma, const DiscConfig& disc, std::uint64_t seed)
    : mode_(mode), sigma_(gaussian_sigma), disc_(disc, seed) {
  DASR_REQUIRE(mode != FreqSep::gaussian || gaussian_sigma > 0.0,
               "critic: gaussian frequency separation needs sigma > 0");
}

int Critic::disc_channels(FreqSep mode, int image_channels) {
  return mode == FreqSep::wavelet ? 3 * image_channels : image_channels;
}

Var Critic::separate(const Var& images) const {
  switch (mode_) {
    case FreqSep::wavelet: return nn::haar_highfreq(images);
    case FreqSep::gaussian: return nn::gaussian_highfreq(images, sigma_);
    case FreqSep::rgb: return images;
  }
  return images;
}

Var Critic::logits(const Var& images) { return disc_.forward(separate(images)); }

}  // namespace dasr::models
