#include "dasr/data/pseudo_pairs.hpp"

#include <fstream>
#include <thread>

#include "dasr/adaptation/domain_distance.hpp"
#include "dasr/data/dataset.hpp"
#include "dasr/data/hash.hpp"
#include "dasr/error.hpp"
#include "dasr/imaging/png_io.hpp"
#include "dasr/imaging/resample.hpp"

namespace dasr::data {

void PseudoPairSet::validate() const {
  DASR_REQUIRE(!pairs.empty(), "pseudo-pair set is empty");
  for (const PseudoPair& p : pairs) {
    DASR_REQUIRE(p.y_g.height() * scale == p.x_r.height() && p.y_g.width() * scale == p.x_r.width(),
                 "pair " + p.name + ": LR dims must equal HR dims / scale");
    DASR_REQUIRE(p.w.channels() == 1 && p.w.height() == p.x_r.height() && p.w.width() == p.x_r.width(),
                 "pair " + p.name + ": weight map must match HR spatial dims");
  }
}

namespace {

struct PairResult {
  Image y_g;
  Image w;
};

PairResult make_pair(models::Dsn& dsn, models::Critic& critic, const Image& hr,
                     const PairGenerationOptions& opt) {
  if (hr.height() % opt.scale != 0 || hr.width() % opt.scale != 0)
    throw InvalidArgument("HR image dims not divisible by scale");
  const Image input = opt.dsn_input_bicubic ? bicubic_resize(hr, {1, opt.scale}) : hr;
  const Image raw = nn::tensor_image(dsn.infer(nn::image_tensor(input)));
  PairResult r;
  r.y_g = quantize_8bit(raw);
  r.w = adaptation::domain_distance_map(critic, r.y_g, hr.height(), hr.width(), opt.weight_floor);
  return r;
}

}  // namespace

nlohmann::json generate_pseudo_pairs(models::Dsn& dsn, models::Critic& critic,
                                     const fs::path& hr_dir, const fs::path& out_dir,
                                     const PairGenerationOptions& options) {
  const auto hr_files = list_png_files(hr_dir);
  if (hr_files.empty()) throw InvalidArgument("generate_pseudo_pairs: no HR images in " + hr_dir.string());
  for (const char* sub : {"lr", "hr", "w"}) fs::create_directories(out_dir / sub);

  dsn.set_trainable(false);
  critic.discriminator().set_trainable(false);

  const std::size_t n = hr_files.size();
  std::vector<Image> hr(n);
  std::vector<PairResult> results(n);
  std::vector<std::string> errors(n);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < n; i += step) {
      try {
        hr[i] = load_image(hr_files[i]);
        results[i] = make_pair(dsn, critic, hr[i], options);
      } catch (const std::exception& e) {
        errors[i] = hr_files[i].string() + ": " + e.what();
      }
    }
  };
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work, static_cast<std::size_t>(t), workers);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error("generate_pseudo_pairs: " + e);

  nlohmann::json manifest;
  manifest["format"] = 1;
  manifest["scale"] = options.scale;
  manifest["dsn_input"] = options.dsn_input_bicubic ? "bicubic" : "hr";
  manifest["weight_floor"] = options.weight_floor;
  manifest["dsn_checkpoint"] = options.dsn_checkpoint_id;
  manifest["disc_checkpoint"] = options.disc_checkpoint_id;
  manifest["pairs"] = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const std::string stem = hr_files[i].stem().string();
    const std::string png = stem + ".png";
    save_image(results[i].y_g, out_dir / "lr" / png);
    save_image(hr[i], out_dir / "hr" / png);
    save_image(results[i].w, out_dir / "w" / png);
    adaptation::save_weight_sidecar(results[i].w, out_dir / "w" / (stem + ".wmap"));
    manifest["pairs"].push_back({{"name", stem},
                                 {"source_sha256", sha256_file(hr_files[i])},
                                 {"lr_sha256", sha256_file(out_dir / "lr" / png)},
                                 {"hr_sha256", sha256_file(out_dir / "hr" / png)},
                                 {"w_png_sha256", sha256_file(out_dir / "w" / png)},
                                 {"w_float_sha256", sha256_file(out_dir / "w" / (stem + ".wmap"))}});
  }
  std::ofstream f(out_dir / "manifest.json");
  if (!f) throw IoError("cannot write manifest in " + out_dir.string());
  f << manifest.dump(2) << "\n";
  return manifest;
}

PseudoPairSet load_pseudo_pairs(const fs::path& dir) {
  std::ifstream f(dir / "manifest.json");
  if (!f) throw IoError("missing pseudo-pair manifest in " + dir.string());
  nlohmann::json manifest;
  try {
    f >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad manifest in " + dir.string() + ": " + e.what());
  }
  PseudoPairSet set;
  set.scale = manifest.at("scale").get<int>();
  for (const auto& entry : manifest.at("pairs")) {
    const std::string name = entry.at("name").get<std::string>();
    PseudoPair p;
    p.name = name;
    p.y_g = load_image(dir / "lr" / (name + ".png"));
    p.x_r = load_image(dir / "hr" / (name + ".png"));
    p.w = adaptation::load_weight_sidecar(dir / "w" / (name + ".wmap"));
    set.pairs.push_back(std::move(p));
  }
  set.validate();
  return set;
}

PseudoPairSet make_bicubic_pairs(const std::vector<Image>& hr, const std::vector<std::string>& names,
                                 int scale) {
  DASR_REQUIRE(hr.size() == names.size(), "make_bicubic_pairs: names/images length mismatch");
  PseudoPairSet set;
  set.scale = scale;
  for (std::size_t i = 0; i < hr.size(); ++i) {
    Image lr = scale == 1 ? hr[i] : bicubic_resize(hr[i], {1, scale});
    set.pairs.push_back({names[i], std::move(lr), hr[i], Image(hr[i].height(), hr[i].width(), 1, 1.0)});
  }
  set.validate();
  return set;
}

}  // namespace dasr::data
