#include "dasr/data/dataset.hpp"

#include <algorithm>

#include "dasr/error.hpp"
#include "dasr/imaging/png_io.hpp"

namespace dasr::data {

std::vector<fs::path> list_png_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

std::vector<Image> load_images(const std::vector<fs::path>& paths) {
  std::vector<Image> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(load_image(p));
  return out;
}

UnpairedDataset UnpairedDataset::from_root(const fs::path& root) {
  return from_dirs(root / "lr", root / "hr");
}

UnpairedDataset UnpairedDataset::from_dirs(const fs::path& lr_dir, const fs::path& hr_dir) {
  UnpairedDataset d{list_png_files(lr_dir), list_png_files(hr_dir)};
  d.validate();
  return d;
}

void UnpairedDataset::validate() const {
  if (real_lr.empty()) throw InvalidArgument("dataset: no real LR images");
  if (real_hr.empty()) throw InvalidArgument("dataset: no HR images");
}

}  // namespace dasr::data
