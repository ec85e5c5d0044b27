#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "dasr/imaging/image.hpp"
#include "dasr/models/networks.hpp"
#include "dasr/nn/tensor.hpp"
#include "json.hpp"

namespace dasr::data {

namespace fs = std::filesystem;

struct PseudoPair {
  std::string name;
  Image y_g;  // LR
  Image x_r;  // HR
  Image w;    // single channel, HR resolution
};

struct PseudoPairSet {
  int scale = 4;
  std::vector<PseudoPair> pairs;

  void validate() const;
};

struct PairGenerationOptions {
  int scale = 4;
  // DSN consumes bicubic LR instead of HR (scale-1 network).
  bool dsn_input_bicubic = false;
  double weight_floor = 0.0;
  int workers = 1;
  std::string dsn_checkpoint_id;
  std::string disc_checkpoint_id;
};

// For every HR image: y_g = DSN(x_r), clamped and quantised to 8 bits, then
// w = domain_distance_map(critic, y_g, H, W). Writes {out}/lr, {out}/hr,
// {out}/w (PNG + .wmap float sidecar) and {out}/manifest.json. Returns the
// manifest.
nlohmann::json generate_pseudo_pairs(models::Dsn& dsn, models::Critic& critic,
                                     const fs::path& hr_dir, const fs::path& out_dir,
                                     const PairGenerationOptions& options);

// Reads a directory written by generate_pseudo_pairs; weights come from the
// float sidecars.
PseudoPairSet load_pseudo_pairs(const fs::path& dir);

// {B(x), x, 1} pairs for the bicubic-source configurations.
PseudoPairSet make_bicubic_pairs(const std::vector<Image>& hr, const std::vector<std::string>& names,
                                 int scale);

struct CropDraw {
  int index;
  int y;  // HR-grid offset, multiple of `align`
  int x;
  bool flip;
};

// Uniform image index, uniform offsets on multiples of `align`, flip with
// probability 0.5 when enabled.
CropDraw draw_crop(std::mt19937_64& rng, const std::vector<Image>& images, int patch, int align,
                   bool flip);

struct PairBatch {
  nn::Tensor lr;
  nn::Tensor hr;
  nn::Tensor weight;  // (N, 1, p, p)
};

// Aligned crops: HR p x p, LR (p / scale)^2 at the matching location, weight
// crop congruent with HR; shared horizontal flip.
PairBatch sample_training_batch(const PseudoPairSet& source, std::mt19937_64& rng, int patch_hr,
                                int batch, bool flip = true);

// Unpaired crops from a single image list.
nn::Tensor sample_crops(const std::vector<Image>& images, std::mt19937_64& rng, int patch,
                        int batch, int align, bool flip = true);

}  // namespace dasr::data
