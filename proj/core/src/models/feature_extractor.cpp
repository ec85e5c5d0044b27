#include <array>
#include <filesystem>

#include "dasr/error.hpp"
#include "dasr/models/networks.hpp"
#include "dasr/nn/archive.hpp"

namespace dasr::models {

RandomConvFeatures::RandomConvFeatures(const std::vector<int>& channels, int image_channels,
                                       std::uint64_t seed) {
  DASR_REQUIRE(!channels.empty(), "random features: need at least one layer");
  std::mt19937_64 rng(seed);
  int in = image_channels;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    layers_.push_back(make_conv("conv" + std::to_string(i), in, channels[i], 3, 2, 1, rng));
    in = channels[i];
  }
  set_trainable(false);
}

Var RandomConvFeatures::forward(const Var& x) {
  Var h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i](h);
    if (i + 1 < layers_.size()) h = nn::relu(h);
  }
  return h;
}

namespace {

struct VggLayer {
  const char* name;
  int in;
  int out;
  bool pool_after;
};

constexpr std::array<VggLayer, 15> kVgg19{{
    {"conv1_1", 3, 64, false},    {"conv1_2", 64, 64, true},    {"conv2_1", 64, 128, false},
    {"conv2_2", 128, 128, true},  {"conv3_1", 128, 256, false}, {"conv3_2", 256, 256, false},
    {"conv3_3", 256, 256, false}, {"conv3_4", 256, 256, true},  {"conv4_1", 256, 512, false},
    {"conv4_2", 512, 512, false}, {"conv4_3", 512, 512, false}, {"conv4_4", 512, 512, true},
    {"conv5_1", 512, 512, false}, {"conv5_2", 512, 512, false}, {"conv5_3", 512, 512, false},
}};

constexpr std::array<double, 3> kImagenetMean{0.485, 0.456, 0.406};
constexpr std::array<double, 3> kImagenetStd{0.229, 0.224, 0.225};

}  // namespace

Vgg19Features::Vgg19Features(const std::string& weights_path) {
  if (weights_path.empty() || !std::filesystem::exists(weights_path))
    throw IoError("vgg19 weights file not found: '" + weights_path + "'");
  const nn::TensorArchive archive = nn::read_archive(weights_path);
  // Initializer draws are discarded; every tensor is overwritten below.
  std::mt19937_64 rng(0);
  for (const VggLayer& l : kVgg19) {
    nn::Conv2d conv = make_conv(l.name, l.in, l.out, 3, 1, 1, rng);
    for (const auto& [suffix, var] : {std::pair{".weight", conv.weight}, std::pair{".bias", conv.bias}}) {
      const Tensor& t = archive.get(std::string(l.name) + suffix);
      if (!(t.shape() == var->value.shape()))
        throw FormatError("vgg19 tensor " + std::string(l.name) + suffix + " has shape " +
                          nn::to_string(t.shape()) + ", expected " +
                          nn::to_string(var->value.shape()));
      var->value = t;
    }
    layers_.push_back(conv);
  }
  set_trainable(false);
}

Var Vgg19Features::forward(const Var& x) {
  DASR_REQUIRE(x->value.shape().c == 3, "vgg19 features need 3-channel input");
  Var h = nn::normalize_channels(x, kImagenetMean, kImagenetStd);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    h = layers_[i](h);
    if (i + 1 == layers_.size()) break;
    h = nn::relu(h);
    if (kVgg19[i].pool_after) h = nn::max_pool2(h);
  }
  return h;
}

std::vector<std::string> vgg19_tensor_names() {
  std::vector<std::string> names;
  for (const VggLayer& l : kVgg19) {
    names.push_back(std::string(l.name) + ".weight");
    names.push_back(std::string(l.name) + ".bias");
  }
  return names;
}

void write_random_vgg19_weights(const std::string& path, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  nn::TensorArchive archive;
  archive.metadata = R"({"kind":"vgg19_conv5_3"})";
  for (const VggLayer& l : kVgg19) {
    Tensor w({l.out, l.in, 3, 3});
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / (l.in * 9.0)));
    for (double& v : w.values()) v = dist(rng);
    archive.tensors.emplace_back(std::string(l.name) + ".weight", std::move(w));
    archive.tensors.emplace_back(std::string(l.name) + ".bias", Tensor({1, l.out, 1, 1}, 0.0));
  }
  nn::write_archive(archive, path);
}

std::unique_ptr<FeatureExtractor> make_feature_extractor(const FeatureConfig& cfg,
                                                          int image_channels) {
  cfg.validate();
  if (cfg.profile == FeatureProfile::vgg19) return std::make_unique<Vgg19Features>(cfg.weights_path);
  return std::make_unique<RandomConvFeatures>(cfg.channels, image_channels, cfg.seed);
}

}  // namespace dasr::models
