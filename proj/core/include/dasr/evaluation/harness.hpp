#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dasr/evaluation/metrics.hpp"
#include "json.hpp"

namespace dasr::evaluation {

struct ImageRecord {
  std::string name;
  double psnr = 0.0;
  double ssim = 0.0;
  std::optional<double> perceptual;
};

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::size_t count = 0;
};

struct EvalError {
  std::string name;
  std::string message;
};

struct EvalReport {
  std::vector<ImageRecord> records;  // sorted by name
  std::vector<EvalError> errors;
  std::string perceptual_name;  // empty when no plug-in was supplied
  nlohmann::json config = nlohmann::json::object();

  Aggregate psnr_stats() const;
  Aggregate ssim_stats() const;
  std::optional<Aggregate> perceptual_stats() const;
  bool ok() const { return errors.empty(); }

  // "# config <json>", header "kind,name,psnr_db,ssim,perceptual", one
  // "image" row per record, "mean"/"std"/"count" footer, then "error" rows.
  std::string to_csv() const;
  void write(const std::filesystem::path& path) const;
};

Aggregate aggregate(const std::vector<double>& values);

struct EvalOptions {
  PerceptualDistance* perceptual = nullptr;
  int workers = 1;
};

// Pairs PNGs by basename. Missing partners, unreadable files and shape
// mismatches become per-file errors; the remaining files are still scored.
EvalReport evaluate_directory(const std::filesystem::path& sr_dir, const std::filesystem::path& gt_dir,
                              const EvalOptions& options = {});

}  // namespace dasr::evaluation
