#include "dasr/models/config.hpp"

#include "dasr/error.hpp"

namespace dasr::models {

namespace {
bool valid_scale(int s) { return s == 1 || s == 2 || s == 4; }
}  // namespace

void DsnConfig::validate() const {
  DASR_REQUIRE(n_res_blocks >= 1, "dsn.n_res_blocks must be >= 1");
  DASR_REQUIRE(channels >= 1, "dsn.channels must be >= 1");
  DASR_REQUIRE(valid_scale(scale), "dsn scale must be 1, 2 or 4");
}

void SrnConfig::validate() const {
  DASR_REQUIRE(n_rrdb_blocks >= 1, "srn.n_rrdb_blocks must be >= 1");
  DASR_REQUIRE(channels >= 1 && growth_channels >= 1, "srn channel counts must be >= 1");
  DASR_REQUIRE(valid_scale(scale), "srn scale must be 1, 2 or 4");
}

void DiscConfig::validate() const {
  DASR_REQUIRE(!kernel_sizes.empty(), "discriminator needs at least one layer");
  DASR_REQUIRE(kernel_sizes.size() == strides.size() && strides.size() == channels.size(),
               "discriminator kernel_sizes, strides and channels must have equal length");
  for (std::size_t i = 0; i < kernel_sizes.size(); ++i)
    DASR_REQUIRE(kernel_sizes[i] >= 1 && strides[i] >= 1 && channels[i] >= 1,
                 "discriminator layer geometry must be positive");
  DASR_REQUIRE(channels.back() == 1, "discriminator must end in a single logit channel");
  DASR_REQUIRE(in_channels >= 1, "discriminator in_channels must be >= 1");
  DASR_REQUIRE(padding >= 0, "discriminator padding must be >= 0");
}

void FeatureConfig::validate() const {
  if (profile == FeatureProfile::random_conv) {
    DASR_REQUIRE(!channels.empty(), "random feature extractor needs at least one layer");
    for (int c : channels) DASR_REQUIRE(c >= 1, "feature channels must be >= 1");
  }
}

std::string to_string(FreqSep f) {
  switch (f) {
    case FreqSep::wavelet: return "wavelet";
    case FreqSep::gaussian: return "gaussian";
    case FreqSep::rgb: return "rgb";
  }
  return "?";
}

FreqSep freqsep_from_string(const std::string& s) {
  if (s == "wavelet") return FreqSep::wavelet;
  if (s == "gaussian") return FreqSep::gaussian;
  if (s == "rgb") return FreqSep::rgb;
  throw InvalidArgument("unknown freqsep '" + s + "' (wavelet|gaussian|rgb)");
}

std::string to_string(FeatureProfile p) {
  return p == FeatureProfile::vgg19 ? "vgg19" : "random";
}

FeatureProfile feature_profile_from_string(const std::string& s) {
  if (s == "random") return FeatureProfile::random_conv;
  if (s == "vgg19") return FeatureProfile::vgg19;
  throw InvalidArgument("unknown feature profile '" + s + "' (random|vgg19)");
}

void to_json(nlohmann::json& j, const DsnConfig& c) {
  j = {{"n_res_blocks", c.n_res_blocks}, {"channels", c.channels}, {"scale", c.scale}};
}
void from_json(const nlohmann::json& j, DsnConfig& c) {
  j.at("n_res_blocks").get_to(c.n_res_blocks);
  j.at("channels").get_to(c.channels);
  j.at("scale").get_to(c.scale);
}
void to_json(nlohmann::json& j, const SrnConfig& c) {
  j = {{"n_rrdb_blocks", c.n_rrdb_blocks},
       {"channels", c.channels},
       {"growth_channels", c.growth_channels},
       {"scale", c.scale}};
}
void from_json(const nlohmann::json& j, SrnConfig& c) {
  j.at("n_rrdb_blocks").get_to(c.n_rrdb_blocks);
  j.at("channels").get_to(c.channels);
  j.at("growth_channels").get_to(c.growth_channels);
  j.at("scale").get_to(c.scale);
}
void to_json(nlohmann::json& j, const DiscConfig& c) {
  j = {{"kernel_sizes", c.kernel_sizes}, {"strides", c.strides},   {"channels", c.channels},
       {"in_channels", c.in_channels},   {"padding", c.padding},   {"leaky_slope", c.leaky_slope}};
}
void from_json(const nlohmann::json& j, DiscConfig& c) {
  j.at("kernel_sizes").get_to(c.kernel_sizes);
  j.at("strides").get_to(c.strides);
  j.at("channels").get_to(c.channels);
  j.at("in_channels").get_to(c.in_channels);
  j.at("padding").get_to(c.padding);
  j.at("leaky_slope").get_to(c.leaky_slope);
}
void to_json(nlohmann::json& j, const FeatureConfig& c) {
  j = {{"profile", to_string(c.profile)},
       {"channels", c.channels},
       {"seed", c.seed},
       {"weights", c.weights_path}};
}
void from_json(const nlohmann::json& j, FeatureConfig& c) {
  c.profile = feature_profile_from_string(j.at("profile").get<std::string>());
  j.at("channels").get_to(c.channels);
  j.at("seed").get_to(c.seed);
  j.at("weights").get_to(c.weights_path);
}

}  // namespace dasr::models
