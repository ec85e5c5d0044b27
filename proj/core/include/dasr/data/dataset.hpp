#pragma once

#include <filesystem>
#include <vector>

#include "dasr/imaging/image.hpp"

namespace dasr::data {

namespace fs = std::filesystem;

// *.png files in `dir`, sorted by filename.
std::vector<fs::path> list_png_files(const fs::path& dir);
std::vector<Image> load_images(const std::vector<fs::path>& paths);

// Unpaired corpora: {root}/lr/*.png (real LR) and {root}/hr/*.png (clean HR).
struct UnpairedDataset {
  std::vector<fs::path> real_lr;
  std::vector<fs::path> real_hr;

  static UnpairedDataset from_root(const fs::path& root);
  static UnpairedDataset from_dirs(const fs::path& lr_dir, const fs::path& hr_dir);
  void validate() const;
};

}  // namespace dasr::data
