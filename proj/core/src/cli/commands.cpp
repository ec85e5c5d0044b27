#include "dasr/cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <random>

#include "CLI11.hpp"
#include "dasr/data/dataset.hpp"
#include "dasr/data/degradation.hpp"
#include "dasr/data/hash.hpp"
#include "dasr/data/pseudo_pairs.hpp"
#include "dasr/evaluation/harness.hpp"
#include "dasr/imaging/png_io.hpp"
#include "dasr/training/trainers.hpp"

namespace dasr::cli {

using nlohmann::json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate", "train-dsn", "generate-pairs",
                                              "train-srn", "sr",        "eval"};
  return names;
}

namespace {

fs::path out_dir(const RunConfig& cfg, const std::string& command) {
  const std::string p = cfg.path("out_dir");
  return p.empty() ? fs::path("runs") / command : fs::path(p);
}

fs::path data_root(const RunConfig& cfg, const std::string& command) {
  const std::string p = cfg.path("data_root");
  if (p.empty()) throw ConfigError(command + " requires paths.data_root (or DASR_DATA_ROOT)");
  return p;
}

std::string numbered(const char* stem, int i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d.png", stem, i);
  return buf;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const fs::path root = data_root(cfg, "simulate");
  const SimulateConfig sim = cfg.simulate();
  const data::DegradationSpec base = cfg.degradation();
  const std::uint64_t seed = cfg.train().seed;
  DASR_REQUIRE(sim.size % base.scale == 0, "simulate.size must be divisible by degradation.scale");
  for (const char* sub : {"hr", "lr", "test/hr", "test/lr"}) fs::create_directories(root / sub);

  std::mt19937_64 content(training::derive_seed(seed, 100));
  std::uint64_t noise_stream = 0;
  auto degrade = [&](const Image& hr) {
    data::DegradationSpec spec = base;
    spec.seed = training::derive_seed(base.seed, noise_stream++);
    return data::simulate_degradation(hr, spec);
  };
  json manifest = {{"degradation", base}, {"seed", seed}, {"files", json::array()}};
  auto record = [&](const fs::path& p) {
    manifest["files"].push_back({{"path", fs::relative(p, root).string()}, {"sha256", data::sha256_file(p)}});
  };
  for (int i = 0; i < sim.train_hr; ++i) {
    const fs::path p = root / "hr" / numbered("hr", i);
    save_image(data::synthesize_hr_image(content, sim.size, sim.size, sim.channels), p);
    record(p);
  }
  for (int i = 0; i < sim.train_lr; ++i) {
    const Image hr = quantize_8bit(data::synthesize_hr_image(content, sim.size, sim.size, sim.channels));
    const fs::path p = root / "lr" / numbered("lr", i);
    save_image(degrade(hr), p);
    record(p);
  }
  for (int i = 0; i < sim.test; ++i) {
    const Image hr = quantize_8bit(data::synthesize_hr_image(content, sim.size, sim.size, sim.channels));
    const fs::path ph = root / "test" / "hr" / numbered("test", i);
    const fs::path pl = root / "test" / "lr" / numbered("test", i);
    save_image(hr, ph);
    save_image(degrade(hr), pl);
    record(ph);
    record(pl);
  }
  std::ofstream(root / "manifest.json") << manifest.dump(2) << "\n";
  cfg.write(root);
  out << "simulate: wrote " << sim.train_hr << " HR, " << sim.train_lr << " LR, " << sim.test
      << " held-out pairs to " << root.string() << "\n";
  return kOk;
}

training::RunOptions run_options(const fs::path& dir) {
  training::RunOptions o;
  o.checkpoint_dir = dir / "checkpoints";
  o.log_path = dir / "train_log.csv";
  return o;
}

void report_checkpoint(const training::Checkpoint& c, const fs::path& path, std::ostream& out) {
  out << "final checkpoint " << path.string() << " iteration " << c.iteration << " sha256 "
      << data::sha256_file(path) << "\n";
}

int cmd_train_dsn(const RunConfig& cfg, std::ostream& out) {
  const fs::path root = data_root(cfg, "train-dsn");
  const fs::path dir = out_dir(cfg, "train-dsn");
  cfg.write(dir);
  const auto dataset = data::UnpairedDataset::from_root(root);
  training::DsnTrainer trainer(cfg.train(), data::load_images(dataset.real_lr),
                               data::load_images(dataset.real_hr));
  if (const std::string resume = cfg.path("resume"); !resume.empty())
    trainer.restore(training::load_checkpoint(resume));
  trainer.run(run_options(dir));
  report_checkpoint(trainer.checkpoint(), dir / "checkpoints" / "final.dasr", out);
  return kOk;
}

int cmd_generate_pairs(const RunConfig& cfg, std::ostream& out) {
  const fs::path root = data_root(cfg, "generate-pairs");
  const fs::path ckpt_path = cfg.require_path("dsn_checkpoint", "generate-pairs");
  const fs::path dir = out_dir(cfg, "generate-pairs");
  const std::string pairs = cfg.path("pairs_dir");
  const fs::path pairs_dir = pairs.empty() ? dir / "pairs" : fs::path(pairs);
  cfg.write(dir);
  const training::Checkpoint ckpt = training::load_checkpoint(ckpt_path);
  auto dsn = training::load_dsn(ckpt, 0);
  auto critic = training::load_critic(ckpt, 0);
  data::PairGenerationOptions opt;
  opt.scale = ckpt.config.scale;
  opt.dsn_input_bicubic = ckpt.config.dsn_input == training::DsnInput::bicubic;
  opt.weight_floor = cfg.train().w_min;
  opt.workers = cfg.workers();
  // The final DSN-phase discriminator scores the pairs, so both ids are the same file.
  opt.dsn_checkpoint_id = opt.disc_checkpoint_id = data::sha256_file(ckpt_path);
  const json manifest = data::generate_pseudo_pairs(*dsn, *critic, root / "hr", pairs_dir, opt);
  out << "generate-pairs: " << manifest.at("pairs").size() << " pairs in " << pairs_dir.string()
      << " manifest sha256 " << data::sha256_file(pairs_dir / "manifest.json") << "\n";
  return kOk;
}

int cmd_train_srn(const RunConfig& cfg, std::ostream& out) {
  const fs::path root = data_root(cfg, "train-srn");
  const fs::path dir = out_dir(cfg, "train-srn");
  const training::TrainConfig tc = cfg.train();
  data::PseudoPairSet source;
  if (tc.source_kind == training::SourceKind::pseudo) {
    source = data::load_pseudo_pairs(cfg.require_path("pairs_dir", "train-srn with source_kind=pseudo"));
  } else {
    const auto files = data::list_png_files(root / "hr");
    std::vector<std::string> names;
    for (const auto& f : files) names.push_back(f.stem().string());
    source = data::make_bicubic_pairs(data::load_images(files), names, tc.scale);
  }
  cfg.write(dir);
  training::SrnTrainer trainer(tc, std::move(source), data::load_images(data::list_png_files(root / "lr")));
  if (const std::string resume = cfg.path("resume"); !resume.empty())
    trainer.restore(training::load_checkpoint(resume));
  trainer.run(run_options(dir));
  report_checkpoint(trainer.checkpoint(), dir / "checkpoints" / "final.dasr", out);
  return kOk;
}

int cmd_sr(const RunConfig& cfg, std::ostream& out) {
  const fs::path ckpt_path = cfg.require_path("srn_checkpoint", "sr");
  std::string input = cfg.path("input_dir");
  if (input.empty()) input = (data_root(cfg, "sr") / "test" / "lr").string();
  const fs::path dir = out_dir(cfg, "sr");
  cfg.write(dir);
  const training::Checkpoint ckpt = training::load_checkpoint(ckpt_path);
  auto srn = training::load_srn(ckpt, 0);
  fs::create_directories(dir / "sr");
  int n = 0;
  for (const auto& f : data::list_png_files(input)) {
    const Image lr = load_image(f);
    save_image(nn::tensor_image(srn->infer(nn::image_tensor(lr))), dir / "sr" / f.filename());
    ++n;
  }
  out << "sr: wrote " << n << " images to " << (dir / "sr").string() << "\n";
  return kOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const fs::path sr_dir = cfg.require_path("sr_dir", "eval");
  std::string gt = cfg.path("gt_dir");
  if (gt.empty()) gt = (data_root(cfg, "eval") / "test" / "hr").string();
  const fs::path dir = out_dir(cfg, "eval");
  cfg.write(dir);
  std::unique_ptr<evaluation::PerceptualDistance> perceptual;
  if (cfg.tree().at("eval").at("perceptual").get<std::string>() == "feature") {
    const auto files = data::list_png_files(gt);
    const int channels = files.empty() ? 3 : load_image(files.front()).channels();
    perceptual = std::make_unique<evaluation::FeatureDistance>(
        models::make_feature_extractor(cfg.train().features, channels));
  }
  evaluation::EvalOptions opt;
  opt.perceptual = perceptual.get();
  opt.workers = cfg.workers();
  evaluation::EvalReport report = evaluation::evaluate_directory(sr_dir, gt, opt);
  report.write(dir / "report.csv");
  const auto p = report.psnr_stats();
  const auto s = report.ssim_stats();
  out << "eval: " << p.count << " images, mean PSNR " << p.mean << " dB, mean SSIM " << s.mean;
  if (!report.ok()) out << ", " << report.errors.size() << " errors";
  out << "\n";
  return report.ok() ? kOk : kEvalErrors;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out) {
  if (command == "simulate") return cmd_simulate(cfg, out);
  if (command == "train-dsn") return cmd_train_dsn(cfg, out);
  if (command == "generate-pairs") return cmd_generate_pairs(cfg, out);
  if (command == "train-srn") return cmd_train_srn(cfg, out);
  if (command == "sr") return cmd_sr(cfg, out);
  if (command == "eval") return cmd_eval(cfg, out);
  throw ConfigError("unknown command '" + command + "'");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Domain-distance aware super-resolution pipeline", "dasr"};
  app.require_subcommand(1);
  std::vector<std::string> configs;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  const std::map<std::string, std::string> blurbs{
      {"simulate", "build a simulated HR/LR dataset under paths.data_root"},
      {"train-dsn", "train the down-sampling network"},
      {"generate-pairs", "write pseudo LR images and weight maps from a DSN checkpoint"},
      {"train-srn", "train the super-resolution network"},
      {"sr", "super-resolve every png in paths.input_dir"},
      {"eval", "PSNR/SSIM report of paths.sr_dir against paths.gt_dir"}};
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, blurbs.count(name) ? blurbs.at(name) : std::string());
    sub->add_option("--config", configs, "JSON config file (repeatable, later files win)");
    sub->add_option("--set", sets, "key=value override (repeatable)");
    sub->add_option("--seed", seed, "run seed");
    sub->add_flag("--deterministic", deterministic, "single worker, bitwise reproducible");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "dasr: " << e.what() << "\n";
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (seed) sets.push_back("seed=" + std::to_string(*seed));
  if (deterministic) sets.push_back("deterministic=true");
  std::optional<training::Phase> phase;
  if (command == "train-dsn" || command == "generate-pairs") phase = training::Phase::dsn;
  if (command == "train-srn") phase = training::Phase::srn;

  RunConfig cfg;
  try {
    std::vector<fs::path> files(configs.begin(), configs.end());
    cfg = parse_config(files, sets, phase);
  } catch (const Error& e) {
    err << "dasr " << command << ": config error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    return run_command(command, cfg, out);
  } catch (const ConfigError& e) {
    err << "dasr " << command << ": config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "dasr " << command << ": " << e.what() << "\n";
    return kRuntimeError;
  }
}

}  // namespace dasr::cli
