#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "dasr/imaging/resample.hpp"
#include "dasr/models/config.hpp"
#include "dasr/nn/module.hpp"

namespace dasr::models {

using nn::Tensor;
using nn::Var;

// Per-sample bicubic resize of an N x C x H x W batch. Both generators add
// their learned output to this fixed base.
nn::Tensor bicubic_batch(const nn::Tensor& x, ScaleFactor s);

// HR -> LR generator: head conv, plain residual trunk, bilinear downscale,
// then conv-ReLU-conv back to image channels, added to bicubic(x).
class Dsn : public nn::Module {
 public:
  Dsn(const DsnConfig& cfg, int image_channels, std::uint64_t seed);
  Var forward(const Var& x) override;

  const DsnConfig& config() const { return cfg_; }
  // Last projection layer; zeroing it reduces the output to bicubic(x).
  nn::Conv2d& tail() { return tail_; }

 private:
  DsnConfig cfg_;
  int image_channels_;
  nn::Conv2d head_;
  std::vector<std::array<nn::Conv2d, 2>> blocks_;
  nn::Conv2d post_;
  nn::Conv2d tail_;
};

// LR -> HR generator in the RRDB style: dense blocks with 0.2 residual
// scaling, nearest-neighbour x2 upsampling stages, added to bicubic(x).
class Srn : public nn::Module {
 public:
  Srn(const SrnConfig& cfg, int image_channels, std::uint64_t seed);
  Var forward(const Var& x) override;

  const SrnConfig& config() const { return cfg_; }
  nn::Conv2d& tail() { return last_; }

 private:
  using DenseBlock = std::array<nn::Conv2d, 5>;
  using Rrdb = std::array<DenseBlock, 3>;

  Var dense_block(const DenseBlock& b, const Var& x) const;

  SrnConfig cfg_;
  nn::Conv2d first_;
  std::vector<Rrdb> trunk_;
  nn::Conv2d trunk_conv_;
  std::vector<nn::Conv2d> upconvs_;
  nn::Conv2d hr_conv_;
  nn::Conv2d last_;
};

// Receptive field by RF <- RF + (k - 1) * jump, jump <- jump * stride.
int receptive_field(const DiscConfig& cfg);
// Spatial output size for an input of `n` pixels.
int disc_output_size(const DiscConfig& cfg, int n);
// Smallest input extent giving at least one output unit.
int disc_min_input(const DiscConfig& cfg);

// Inclusive input range [first, last] seen by output unit `u` along one axis.
// May extend past the image when padding is used.
struct Window {
  int first;
  int last;
};
Window receptive_window(const DiscConfig& cfg, int u);

// Fully convolutional patch discriminator emitting raw logits.
class Discriminator : public nn::Module {
 public:
  Discriminator(const DiscConfig& cfg, std::uint64_t seed);
  Var forward(const Var& x) override;

  const DiscConfig& config() const { return cfg_; }
  nn::Conv2d& last_layer() { return layers_.back(); }

 private:
  DiscConfig cfg_;
  std::vector<nn::Conv2d> layers_;
};

// Frozen perceptual feature extractor.
class FeatureExtractor : public nn::Module {
 public:
  // Total spatial downsampling factor.
  virtual int stride() const = 0;
};

// Seeded random stride-2 conv stack, ReLU between layers, last layer linear.
class RandomConvFeatures : public FeatureExtractor {
 public:
  RandomConvFeatures(const std::vector<int>& channels, int image_channels, std::uint64_t seed);
  Var forward(const Var& x) override;
  int stride() const override { return 1 << static_cast<int>(layers_.size()); }

 private:
  std::vector<nn::Conv2d> layers_;
};

// VGG-19 through conv5_3 (pre-activation), ImageNet input normalisation.
// Weights come from a tensor archive with names "conv1_1.weight", ...,
// "conv5_3.bias"; see vgg19_tensor_names().
class Vgg19Features : public FeatureExtractor {
 public:
  explicit Vgg19Features(const std::string& weights_path);
  Var forward(const Var& x) override;
  int stride() const override { return 16; }

 private:
  // Max-pool after these layer indices.
  std::vector<nn::Conv2d> layers_;
};

std::vector<std::string> vgg19_tensor_names();
// Deterministic stand-in weights with the production layout (for tests).
void write_random_vgg19_weights(const std::string& path, std::uint64_t seed);

std::unique_ptr<FeatureExtractor> make_feature_extractor(const FeatureConfig& cfg,
                                                          int image_channels);

// Frequency separation followed by the patch discriminator.
class Critic {
 public:
  Critic(FreqSep mode, double gaussian_sigma, const DiscConfig& disc, std::uint64_t seed);

  // Input channels the discriminator needs for images with `image_channels`.
  static int disc_channels(FreqSep mode, int image_channels);

  Var separate(const Var& images) const;
  Var logits(const Var& images);

  FreqSep mode() const { return mode_; }
  double gaussian_sigma() const { return sigma_; }
  Discriminator& discriminator() { return disc_; }
  const Discriminator& discriminator() const { return disc_; }

 private:
  FreqSep mode_;
  double sigma_;
  Discriminator disc_;
};

}  // namespace dasr::models
