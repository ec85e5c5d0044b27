#include "dasr/error.hpp"
#include "dasr/models/networks.hpp"

namespace dasr::models {

int receptive_field(const DiscConfig& cfg) {
  DASR_REQUIRE(!cfg.kernel_sizes.empty(), "receptive_field: empty layer list");
  DASR_REQUIRE(cfg.kernel_sizes.size() == cfg.strides.size(),
               "receptive_field: kernel/stride length mismatch");
  int rf = 1;
  int jump = 1;
  for (std::size_t i = 0; i < cfg.kernel_sizes.size(); ++i) {
    rf += (cfg.kernel_sizes[i] - 1) * jump;
    jump *= cfg.strides[i];
  }
  return rf;
}

int disc_output_size(const DiscConfig& cfg, int n) {
  for (std::size_t i = 0; i < cfg.kernel_sizes.size(); ++i) {
    const int padded = n + 2 * cfg.padding;
    if (padded < cfg.kernel_sizes[i]) return 0;
    n = (padded - cfg.kernel_sizes[i]) / cfg.strides[i] + 1;
  }
  return n;
}

int disc_min_input(const DiscConfig& cfg) {
  for (int n = 1;; ++n)
    if (disc_output_size(cfg, n) >= 1) return n;
}

Window receptive_window(const DiscConfig& cfg, int u) {
  int jump = 1;
  int offset = 0;
  for (int s : cfg.strides) {
    offset -= cfg.padding * jump;
    jump *= s;
  }
  const int first = u * jump + offset;
  return {first, first + receptive_field(cfg) - 1};
}

Discriminator::Discriminator(const DiscConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  std::mt19937_64 rng(seed);
  int in = cfg_.in_channels;
  for (std::size_t i = 0; i < cfg_.kernel_sizes.size(); ++i) {
    layers_.push_back(make_conv("conv" + std::to_string(i), in, cfg_.channels[i],
                                cfg_.kernel_sizes[i], cfg_.strides[i], cfg_.padding, rng));
    in = cfg_.channels[i];
  }
}

Var Discriminator::forward(const Var& x) {
  const auto& s = x->value.shape();
  const int min_in = disc_min_input(cfg_);
  if (s.h < min_in || s.w < min_in)
    throw InvalidArgument("discriminator: input " + nn::to_string(s) +
                          " smaller than the minimum extent " + std::to_string(min_in));
  Var h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i](h);
    if (i + 1 < layers_.size()) h = nn::leaky_relu(h, cfg_.leaky_slope);
  }
  return h;
}

}  // namespace dasr::models
