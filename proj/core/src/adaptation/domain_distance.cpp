#include "dasr/adaptation/domain_distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "dasr/error.hpp"
#include "dasr/imaging/resample.hpp"
#include "dasr/nn/ops.hpp"

namespace dasr::adaptation {

Image score_map(models::Critic& critic, const Image& y_g) {
  require_valid_image(y_g, "domain_distance_map");
  const auto& dcfg = critic.discriminator().config();
  const int min_in = models::disc_min_input(dcfg);
  const int sep_h = critic.mode() == models::FreqSep::wavelet ? y_g.height() / 2 : y_g.height();
  const int sep_w = critic.mode() == models::FreqSep::wavelet ? y_g.width() / 2 : y_g.width();
  if (sep_h < min_in || sep_w < min_in)
    throw InvalidArgument("domain_distance_map: generated LR image too small for one discriminator patch");
  const nn::Tensor logits = critic.logits(nn::constant(nn::image_tensor(y_g)))->value;
  Image scores = nn::tensor_image(logits, 0);
  // Saturated logits would round to exactly 0 or 1; keep weights strictly inside.
  constexpr double eps = 1e-6;
  for (double& v : scores.values()) {
    v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    v = std::clamp(v, eps, 1.0 - eps);
  }
  return scores;
}

Image domain_distance_map(models::Critic& critic, const Image& y_g, int hr_h, int hr_w,
                          double floor) {
  DASR_REQUIRE(hr_h >= 1 && hr_w >= 1, "domain_distance_map: invalid target dims");
  DASR_REQUIRE(floor >= 0.0 && floor < 1.0, "domain_distance_map: floor must be in [0, 1)");
  Image w = bilinear_resize(score_map(critic, y_g), hr_h, hr_w);
  if (floor > 0.0)
    for (double& v : w.values()) v = std::max(v, floor);
  return w;
}

namespace {
constexpr char kSidecarMagic[4] = {'D', 'W', 'M', 'F'};
constexpr std::uint32_t kSidecarVersion = 1;
}  // namespace

void save_weight_sidecar(const Image& w, const std::filesystem::path& path) {
  DASR_REQUIRE(w.channels() == 1, "weight sidecar: map must be single-channel");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  const std::uint32_t header[3] = {kSidecarVersion, static_cast<std::uint32_t>(w.height()),
                                   static_cast<std::uint32_t>(w.width())};
  f.write(kSidecarMagic, 4);
  f.write(reinterpret_cast<const char*>(header), sizeof(header));
  f.write(reinterpret_cast<const char*>(w.values().data()),
          static_cast<std::streamsize>(w.size() * sizeof(double)));
  if (!f) throw IoError("write failed for " + path.string());
}

Image load_weight_sidecar(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("missing file: " + path.string());
  char magic[4];
  std::uint32_t header[3];
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!f || std::memcmp(magic, kSidecarMagic, 4) != 0)
    throw FormatError("not a weight-map sidecar: " + path.string());
  if (header[0] != kSidecarVersion) throw FormatError("unsupported sidecar version");
  Image w(static_cast<int>(header[1]), static_cast<int>(header[2]), 1);
  f.read(reinterpret_cast<char*>(w.values().data()),
         static_cast<std::streamsize>(w.size() * sizeof(double)));
  if (!f) throw FormatError("truncated weight-map sidecar: " + path.string());
  return w;
}

}  // namespace dasr::adaptation
