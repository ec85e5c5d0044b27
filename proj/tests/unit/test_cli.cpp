#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dasr/cli/commands.hpp"
#include "dasr/cli/run_config.hpp"
#include "dasr/data/dataset.hpp"
#include "test_support.hpp"

using namespace dasr;
using namespace dasr::cli;
using dasr::testing::TempDir;

namespace {

void write_json(const fs::path& p, const nlohmann::json& j) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << j.dump(2);
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream f(p);
  return nlohmann::json::parse(f);
}

struct Cli {
  std::ostringstream out, err;
  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "dasr");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    out.str("");
    err.str("");
    return main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  }
};

// Small enough that the whole pipeline runs in seconds.
nlohmann::json tiny_profile() {
  return {{"pretrain_iters", 2},
          {"total_iters", 2},
          {"batch", 2},
          {"patch_hr", 16},
          {"model",
           {{"dsn", {{"n_res_blocks", 1}, {"channels", 4}}},
            {"srn", {{"n_rrdb_blocks", 1}, {"channels", 4}, {"growth_channels", 4}}},
            {"disc", {{"channels", {4, 4, 4, 1}}}},
            {"features", {{"channels", {4}}}}}},
          {"simulate", {{"train_hr", 3}, {"train_lr", 3}, {"test", 2}, {"size", 32}}}};
}

}  // namespace

class EnvGuard {
 public:
  EnvGuard() {
    if (const char* v = std::getenv("DASR_DATA_ROOT")) saved_ = v;
    unsetenv("DASR_DATA_ROOT");
  }
  ~EnvGuard() {
    if (saved_) setenv("DASR_DATA_ROOT", saved_->c_str(), 1);
    else unsetenv("DASR_DATA_ROOT");
  }

 private:
  std::optional<std::string> saved_;
};

TEST(RunConfig, EmptyFileGivesPaperDsnDefaults) {
  EnvGuard env;
  TempDir dir;
  std::ofstream(dir / "empty.json") << "{}";
  const RunConfig rc = parse_config({dir / "empty.json"}, {});
  const auto t = rc.train();
  EXPECT_EQ(t.phase, training::Phase::dsn);
  EXPECT_EQ(t.loss, (objectives::LossWeights{0.01, 1.0, 0.0005}));
  EXPECT_EQ(t.batch, 16);
  EXPECT_EQ(t.patch_hr, 192);
  EXPECT_EQ(rc.provenance().at("loss.gamma"), "default");
  EXPECT_EQ(rc.degradation().blur_sigma, 1.2);
  EXPECT_EQ(rc.workers(), 1);
  EXPECT_EQ(rc.path("data_root"), "");
}

TEST(RunConfig, SrnProfileAndOverride) {
  EnvGuard env;
  TempDir dir;
  write_json(dir / "srn.json", {{"phase", "srn"}, {"loss", {{"gamma", 0.0005}}}});
  const RunConfig rc = parse_config({dir / "srn.json"}, {"loss.gamma=0.005"});
  EXPECT_EQ(rc.train().phase, training::Phase::srn);
  EXPECT_EQ(rc.train().loss.gamma, 0.005);
  EXPECT_EQ(rc.train().lr_init, 2e-4);
  EXPECT_EQ(rc.provenance().at("loss.gamma"), "override");
  EXPECT_EQ(rc.provenance().at("lr_init"), "phase:srn");
  EXPECT_EQ(rc.provenance().at("phase"), "file:" + (dir / "srn.json").string());
}

TEST(RunConfig, PrecedenceAcrossLayers) {
  EnvGuard env;
  TempDir dir;
  write_json(dir / "a.json", {{"batch", 4}, {"patch_hr", 64}});
  write_json(dir / "b.json", {{"batch", 8}});
  const RunConfig rc = parse_config({dir / "a.json", dir / "b.json"}, {"seed=9"});
  EXPECT_EQ(rc.train().batch, 8);
  EXPECT_EQ(rc.train().patch_hr, 64);
  EXPECT_EQ(rc.train().seed, 9u);
  EXPECT_EQ(rc.provenance().at("patch_hr"), "file:" + (dir / "a.json").string());
  EXPECT_EQ(rc.provenance().at("batch"), "file:" + (dir / "b.json").string());
}

TEST(RunConfig, SchemaViolations) {
  EnvGuard env;
  TempDir dir;
  write_json(dir / "unknown.json", {{"foo", {{"bar", 1}}}});
  try {
    parse_config({dir / "unknown.json"}, {});
    FAIL() << "unknown key accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("foo.bar"), std::string::npos);
  }
  EXPECT_THROW(parse_config({}, {"foo.bar=1"}), ConfigError);
  EXPECT_THROW(parse_config({}, {"batch=many"}), ConfigError);
  EXPECT_THROW(parse_config({}, {"batch=1.5"}), ConfigError);
  EXPECT_THROW(parse_config({}, {"flags.freqsep=3"}), ConfigError);
  EXPECT_THROW(parse_config({}, {"no_equals_sign"}), ConfigError);
  EXPECT_THROW(parse_config({}, {"batch=0"}), ConfigError);
  EXPECT_THROW(parse_config({}, {"flags.freqsep=dct"}), ConfigError);
  EXPECT_THROW(parse_config({dir / "missing.json"}, {}), ConfigError);
  std::ofstream(dir / "broken.json") << "{ nope";
  EXPECT_THROW(parse_config({dir / "broken.json"}, {}), ConfigError);
  EXPECT_THROW(parse_config({}, {"phase=srn"}, training::Phase::dsn), ConfigError);
  EXPECT_NO_THROW(parse_config({}, {"lr_init=1"}));
}

TEST(RunConfig, RoundTripThroughResolvedFile) {
  EnvGuard env;
  TempDir dir;
  write_json(dir / "p.json", {{"phase", "srn"}, {"flags", {{"weighted_supervision", false}}}});
  const RunConfig a = parse_config({dir / "p.json"}, {"paths.out_dir=/tmp/x", "w_min=0.1"});
  a.write(dir / "out");
  EXPECT_TRUE(fs::exists(dir / "out" / "config_provenance.json"));
  const RunConfig b = parse_config({dir / "out" / "resolved_config.json"}, {});
  EXPECT_TRUE(a == b);
  EXPECT_EQ(nlohmann::json(b.train()), nlohmann::json(a.train()));
}

TEST(RunConfig, DataRootFromEnvironment) {
  EnvGuard env;
  setenv("DASR_DATA_ROOT", "/data/root", 1);
  const RunConfig rc = parse_config({}, {});
  EXPECT_EQ(rc.path("data_root"), "/data/root");
  EXPECT_EQ(rc.provenance().at("paths.data_root"), "env:DASR_DATA_ROOT");
  const RunConfig explicit_root = parse_config({}, {"paths.data_root=/elsewhere"});
  EXPECT_EQ(explicit_root.path("data_root"), "/elsewhere");
  EXPECT_THROW(rc.require_path("sr_dir", "eval"), ConfigError);
}

TEST(RunConfig, FlattenTreatsArraysAsLeaves) {
  const auto flat = flatten(default_tree(training::Phase::dsn));
  EXPECT_TRUE(flat.count("model.disc.channels"));
  EXPECT_TRUE(flat.at("model.disc.channels").is_array());
  EXPECT_FALSE(flat.count("model.disc"));
  EXPECT_EQ(flat.at("loss.alpha"), 0.01);
}

TEST(Cli, UsageErrors) {
  EnvGuard env;
  Cli cli;
  EXPECT_EQ(cli.run({}), kConfigError);
  EXPECT_EQ(cli.run({"frobnicate"}), kConfigError);
  EXPECT_EQ(cli.run({"train-dsn", "--bogus"}), kConfigError);
  EXPECT_EQ(cli.run({"train-dsn", "--set", "foo.bar=1"}), kConfigError);
  EXPECT_NE(cli.err.str().find("foo.bar"), std::string::npos);
  EXPECT_EQ(cli.run({"eval"}), kConfigError);
  EXPECT_EQ(cli.run({"train-srn", "--set", "phase=dsn"}), kConfigError);
  EXPECT_EQ(command_names().size(), 6u);
}

TEST(Cli, RuntimeFailure) {
  EnvGuard env;
  TempDir dir;
  Cli cli;
  EXPECT_EQ(cli.run({"train-dsn", "--set", "paths.data_root=" + (dir / "nothing").string(), "--set",
                     "paths.out_dir=" + (dir / "o").string()}),
            kRuntimeError);
}

TEST(Cli, EndToEndPipeline) {
  EnvGuard env;
  TempDir dir;
  write_json(dir / "tiny.json", tiny_profile());
  const std::string data = "paths.data_root=" + (dir / "data").string();
  Cli cli;
  auto common = [&](std::string cmd, std::vector<std::string> extra) {
    std::vector<std::string> a{cmd, "--config", (dir / "tiny.json").string(), "--set", data, "--deterministic"};
    for (auto& e : extra) a.push_back(e);
    return cli.run(a);
  };
  ASSERT_EQ(common("simulate", {}), kOk) << cli.err.str();
  EXPECT_EQ(data::list_png_files(dir / "data" / "hr").size(), 3u);
  EXPECT_EQ(data::list_png_files(dir / "data" / "test" / "lr").size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "data" / "manifest.json"));

  ASSERT_EQ(common("train-dsn", {"--set", "paths.out_dir=" + (dir / "dsn").string()}), kOk) << cli.err.str();
  EXPECT_NE(cli.out.str().find("sha256"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "dsn" / "checkpoints" / "final.dasr"));
  EXPECT_TRUE(fs::exists(dir / "dsn" / "resolved_config.json"));
  EXPECT_TRUE(fs::exists(dir / "dsn" / "train_log.csv"));

  ASSERT_EQ(common("generate-pairs", {"--set", "paths.dsn_checkpoint=" + (dir / "dsn/checkpoints/final.dasr").string(),
                                      "--set", "paths.pairs_dir=" + (dir / "pairs").string(), "--set",
                                      "paths.out_dir=" + (dir / "gp").string()}),
            kOk)
      << cli.err.str();
  const auto manifest = read_json(dir / "pairs" / "manifest.json");
  EXPECT_EQ(manifest["pairs"].size(), 3u);
  EXPECT_EQ(manifest["dsn_checkpoint"], manifest["disc_checkpoint"]);

  ASSERT_EQ(common("train-srn", {"--set", "phase=srn", "--set", "paths.pairs_dir=" + (dir / "pairs").string(),
                                 "--set", "paths.out_dir=" + (dir / "srn").string()}),
            kOk)
      << cli.err.str();
  const std::string srn_ckpt = (dir / "srn" / "checkpoints" / "final.dasr").string();
  ASSERT_TRUE(fs::exists(srn_ckpt));

  ASSERT_EQ(common("sr", {"--set", "paths.srn_checkpoint=" + srn_ckpt, "--set",
                          "paths.out_dir=" + (dir / "infer").string()}),
            kOk)
      << cli.err.str();
  EXPECT_EQ(data::list_png_files(dir / "infer" / "sr").size(), 2u);

  ASSERT_EQ(common("eval", {"--set", "paths.sr_dir=" + (dir / "infer" / "sr").string(), "--set",
                            "paths.out_dir=" + (dir / "ev").string()}),
            kOk)
      << cli.err.str();
  EXPECT_TRUE(fs::exists(dir / "ev" / "report.csv"));

  // A stray file in the SR directory turns into an error row and exit 3.
  std::ofstream(dir / "infer" / "sr" / "extra.png") << "junk";
  EXPECT_EQ(common("eval", {"--set", "paths.sr_dir=" + (dir / "infer" / "sr").string(), "--set",
                            "paths.out_dir=" + (dir / "ev2").string()}),
            kEvalErrors);
  EXPECT_TRUE(fs::exists(dir / "ev2" / "report.csv"));
}
