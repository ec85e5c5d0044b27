#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace dasr::models {

struct DsnConfig {
  int n_res_blocks = 23;
  int channels = 64;
  int scale = 4;

  void validate() const;
};

struct SrnConfig {
  int n_rrdb_blocks = 23;
  int channels = 64;
  int growth_channels = 32;
  int scale = 4;

  void validate() const;
};

// Patch discriminator. With padding 0 every output unit sees a full 23x23
// window; padding 1 keeps small inputs usable and clips windows at borders.
struct DiscConfig {
  std::vector<int> kernel_sizes{3, 3, 3, 3};
  std::vector<int> strides{2, 2, 1, 1};
  std::vector<int> channels{64, 128, 256, 1};
  int in_channels = 9;
  int padding = 1;
  double leaky_slope = 0.2;

  void validate() const;
};

enum class FeatureProfile { random_conv, vgg19 };

struct FeatureConfig {
  FeatureProfile profile = FeatureProfile::random_conv;
  std::vector<int> channels{16, 32, 32, 32};
  unsigned long long seed = 20200823;
  std::string weights_path;

  void validate() const;
};

// Space the discriminator plays in.
enum class FreqSep { wavelet, gaussian, rgb };

std::string to_string(FreqSep f);
FreqSep freqsep_from_string(const std::string& s);
std::string to_string(FeatureProfile p);
FeatureProfile feature_profile_from_string(const std::string& s);

void to_json(nlohmann::json& j, const DsnConfig& c);
void from_json(const nlohmann::json& j, DsnConfig& c);
void to_json(nlohmann::json& j, const SrnConfig& c);
void from_json(const nlohmann::json& j, SrnConfig& c);
void to_json(nlohmann::json& j, const DiscConfig& c);
void from_json(const nlohmann::json& j, DiscConfig& c);
void to_json(nlohmann::json& j, const FeatureConfig& c);
void from_json(const nlohmann::json& j, FeatureConfig& c);

}  // namespace dasr::models
