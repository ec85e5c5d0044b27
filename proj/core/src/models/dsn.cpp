#include "dasr/error.hpp"
#include "dasr/models/networks.hpp"

namespace dasr::models {

namespace {
// Small init on residual branches and the output layer keeps the untrained
// trunk's contribution near zero, so the output starts close to bicubic(x).
constexpr double kResidualGain = 0.1;
}  // namespace

nn::Tensor bicubic_batch(const nn::Tensor& x, ScaleFactor s) {
  if (s.num == s.den) return x;
  std::vector<Image> out;
  for (const Image& img : nn::unstack_images(x)) out.push_back(bicubic_resize(img, s));
  return nn::stack_images(out);
}

Dsn::Dsn(const DsnConfig& cfg, int image_channels, std::uint64_t seed)
    : cfg_(cfg), image_channels_(image_channels) {
  cfg_.validate();
  DASR_REQUIRE(image_channels >= 1, "dsn: image channels must be >= 1");
  std::mt19937_64 rng(seed);
  const int ch = cfg_.channels;
  head_ = make_conv("head", image_channels, ch, 3, 1, 1, rng);
  for (int i = 0; i < cfg_.n_res_blocks; ++i) {
    const std::string p = "res" + std::to_string(i);
    blocks_.push_back({make_conv(p + ".conv0", ch, ch, 3, 1, 1, rng),
                       make_conv(p + ".conv1", ch, ch, 3, 1, 1, rng, kResidualGain)});
  }
  post_ = make_conv("post", ch, ch, 3, 1, 1, rng);
  tail_ = make_conv("tail", ch, image_channels, 3, 1, 1, rng, kResidualGain);
}

Var Dsn::forward(const Var& x) {
  const auto& s = x->value.shape();
  if (s.h % cfg_.scale != 0 || s.w % cfg_.scale != 0)
    throw InvalidArgument("dsn: input " + nn::to_string(s) + " not divisible by scale " +
                          std::to_string(cfg_.scale));
  Var h = head_(x);
  for (const auto& [c0, c1] : blocks_) h = nn::add(h, c1(nn::relu(c0(h))));
  if (cfg_.scale != 1) h = nn::bilinear_resize(h, s.h / cfg_.scale, s.w / cfg_.scale);
  DASR_REQUIRE(!x->requires_grad, "dsn: input must not require gradients");
  return nn::add(nn::constant(bicubic_batch(x->value, {1, cfg_.scale})), tail_(nn::relu(post_(h))));
}

}  // namespace dasr::models
