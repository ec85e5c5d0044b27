#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dasr/nn/archive.hpp"
#include "dasr/nn/module.hpp"
#include "dasr/training/config.hpp"
#include "json.hpp"

namespace dasr::training {

// Full trainer state: parameters under "<net>.<param>", optimizer moments,
// the config snapshot and the sampler rng.
struct Checkpoint {
  Phase phase = Phase::dsn;
  std::uint64_t iteration = 0;
  TrainConfig config;
  std::string rng_state;
  nlohmann::json extra = nlohmann::json::object();  // optimizer step counts, ...
  std::vector<std::pair<std::string, nn::Tensor>> tensors;

  const nn::Tensor& tensor(const std::string& name) const;
  bool has(const std::string& name) const;
};

nn::TensorArchive to_archive(const Checkpoint& ckpt);
Checkpoint from_archive(const nn::TensorArchive& archive);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Missing file -> IoError, corruption -> ChecksumError, version -> FormatError.
Checkpoint load_checkpoint(const std::filesystem::path& path);

void append_module(Checkpoint& ckpt, const std::string& prefix, const nn::Module& m);
// Shapes must match exactly; extra tensors in the checkpoint are ignored.
void load_module(const Checkpoint& ckpt, const std::string& prefix, nn::Module& m);

// SHA-256 of the serialized checkpoint bytes.
std::string checkpoint_hash(const Checkpoint& ckpt);

}  // namespace dasr::training
