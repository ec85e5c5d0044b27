#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dasr/data/degradation.hpp"
#include "dasr/error.hpp"
#include "dasr/training/config.hpp"
#include "json.hpp"

namespace dasr::cli {

namespace fs = std::filesystem;

// Unknown key, wrong type, unreadable config file or missing required value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Settings for the desk dataset builder.
struct SimulateConfig {
  int train_hr = 64;   // clean HR images (X^r)
  int train_lr = 64;   // real LR images (Y^r), degraded from separate content
  int test = 8;        // held-out LR with hidden HR ground truth
  int size = 128;      // HR side length
  int channels = 3;
};

// Resolved run configuration: training fields at the top level plus the
// `degradation`, `simulate`, `paths` and `eval` sections.
class RunConfig {
 public:
  const nlohmann::json& tree() const { return tree_; }
  // "default", "phase:<dsn|srn>", "file:<path>" or "override" for every leaf.
  const std::map<std::string, std::string>& provenance() const { return provenance_; }

  training::TrainConfig train() const;
  data::DegradationSpec degradation() const;
  SimulateConfig simulate() const;
  bool deterministic() const;
  int workers() const;
  // Empty string when unset.
  std::string path(const std::string& key) const;
  std::string require_path(const std::string& key, const std::string& command) const;
  double get_double(const std::string& dotted) const;

  nlohmann::json resolved() const { return tree_; }
  nlohmann::json with_provenance() const;
  // Writes resolved_config.json (and its provenance) into `dir`.
  void write(const fs::path& dir) const;

  friend bool operator==(const RunConfig& a, const RunConfig& b) { return a.tree_ == b.tree_; }

 private:
  friend RunConfig parse_config(const std::vector<fs::path>&, const std::vector<std::string>&,
                                std::optional<training::Phase>);
  nlohmann::json tree_;
  std::map<std::string, std::string> provenance_;
};

// Full default tree for a phase. Also serves as the schema: every leaf's
// JSON type is the accepted type for that key.
nlohmann::json default_tree(training::Phase phase);

// defaults(phase) < files (in order) < `key=value` overrides. The phase comes
// from the highest layer that sets it, else `command_phase`, else dsn; a
// phase that contradicts `command_phase` is an error.
RunConfig parse_config(const std::vector<fs::path>& files, const std::vector<std::string>& overrides,
                       std::optional<training::Phase> command_phase = std::nullopt);

// Dotted-key view of a tree; arrays are leaves.
std::map<std::string, nlohmann::json> flatten(const nlohmann::json& tree);

}  // namespace dasr::cli
