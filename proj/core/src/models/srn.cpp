#include <bit>

#include "dasr/error.hpp"
#include "dasr/models/networks.hpp"

namespace dasr::models {

namespace {
constexpr double kResidualScale = 0.2;
constexpr double kSlope = 0.2;
// ESRGAN-style 0.1 init scaling for the dense-block convs and output layer.
constexpr double kInitGain = 0.1;
}  // namespace

Srn::Srn(const SrnConfig& cfg, int image_channels, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  DASR_REQUIRE(image_channels >= 1, "srn: image channels must be >= 1");
  std::mt19937_64 rng(seed);
  const int nf = cfg_.channels;
  const int gc = cfg_.growth_channels;
  first_ = make_conv("first", image_channels, nf, 3, 1, 1, rng);
  for (int b = 0; b < cfg_.n_rrdb_blocks; ++b) {
    Rrdb rrdb;
    for (int d = 0; d < 3; ++d) {
      const std::string p = "rrdb" + std::to_string(b) + ".rdb" + std::to_string(d);
      for (int i = 0; i < 4; ++i)
        rrdb[d][i] = make_conv(p + ".conv" + std::to_string(i), nf + i * gc, gc, 3, 1, 1, rng, kInitGain);
      rrdb[d][4] = make_conv(p + ".conv4", nf + 4 * gc, nf, 3, 1, 1, rng, kInitGain);
    }
    trunk_.push_back(std::move(rrdb));
  }
  trunk_conv_ = make_conv("trunk_conv", nf, nf, 3, 1, 1, rng);
  const int stages = std::countr_zero(static_cast<unsigned>(cfg_.scale));
  for (int i = 0; i < stages; ++i)
    upconvs_.push_back(make_conv("up" + std::to_string(i), nf, nf, 3, 1, 1, rng));
  hr_conv_ = make_conv("hr_conv", nf, nf, 3, 1, 1, rng);
  last_ = make_conv("last", nf, image_channels, 3, 1, 1, rng, kInitGain);
}

Var Srn::dense_block(const DenseBlock& b, const Var& x) const {
  std::vector<Var> feats{x};
  for (int i = 0; i < 4; ++i) feats.push_back(nn::leaky_relu(b[i](nn::concat_channels(feats)), kSlope));
  return nn::add_scaled(x, b[4](nn::concat_channels(feats)), kResidualScale);
}

Var Srn::forward(const Var& x) {
  DASR_REQUIRE(!x->requires_grad, "srn: input must not require gradients");
  Var fea = first_(x);
  Var h = fea;
  for (const Rrdb& rrdb : trunk_) {
    Var r = h;
    for (const DenseBlock& d : rrdb) r = dense_block(d, r);
    h = nn::add_scaled(h, r, kResidualScale);
  }
  h = nn::add(fea, trunk_conv_(h));
  for (const nn::Conv2d& up : upconvs_)
    h = nn::leaky_relu(up(nn::upsample_nearest(h, 2)), kSlope);
  return nn::add(nn::constant(bicubic_batch(x->value, {cfg_.scale, 1})),
                 last_(nn::leaky_relu(hr_conv_(h), kSlope)));
}

}  // namespace dasr::models
