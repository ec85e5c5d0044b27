#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "dasr/data/dataset.hpp"
#include "dasr/data/pseudo_pairs.hpp"
#include "dasr/models/networks.hpp"
#include "dasr/training/adam.hpp"
#include "dasr/training/checkpoint.hpp"
#include "dasr/training/config.hpp"
#include "dasr/training/train_log.hpp"

namespace dasr::training {

struct RunOptions {
  // Directory for periodic checkpoints ("ckpt_<iter>.dasr" and "final.dasr"); empty disables.
  std::filesystem::path checkpoint_dir;
  std::filesystem::path log_path;
  // Train until this global step (pretraining included); -1 means the end.
  int stop_at = -1;
};

// Observer called after every step with the logged values.
using StepHook = std::function<void(const LogRow&)>;

// One trainer owns the networks, optimizers and sampler rng. Steps with
// index < pretrain_iters are content-only; later steps alternate one
// generator and one discriminator update.
class DsnTrainer {
 public:
  DsnTrainer(const TrainConfig& cfg, std::vector<Image> real_lr, std::vector<Image> real_hr);

  LogRow step();
  void run(const RunOptions& options = {}, const StepHook& hook = {});

  int iteration() const { return iter_; }
  int final_iteration() const { return cfg_.pretrain_iters + cfg_.total_iters; }
  Checkpoint checkpoint() const;
  void restore(const Checkpoint& ckpt);

  const TrainConfig& config() const { return cfg_; }
  models::Dsn& dsn() { return *dsn_; }
  models::Critic& critic() { return *critic_; }
  // Latest generator/discriminator gradient norms, measured on the network
  // that was frozen during each half-step (must be 0).
  double frozen_grad_norm() const { return frozen_norm_; }

 private:
  objectives::DsnBatch sample_batch(nn::Tensor& real_lr);

  TrainConfig cfg_;
  std::vector<Image> real_lr_;
  data::PseudoPairSet hr_pairs_;  // {B(x), x}
  std::unique_ptr<models::Dsn> dsn_;
  std::unique_ptr<models::Critic> critic_;
  std::unique_ptr<models::FeatureExtractor> phi_;
  std::unique_ptr<Adam> opt_g_;
  std::unique_ptr<Adam> opt_d_;
  std::mt19937_64 rng_;
  int iter_ = 0;
  double frozen_norm_ = 0.0;
};

class SrnTrainer {
 public:
  SrnTrainer(const TrainConfig& cfg, data::PseudoPairSet source, std::vector<Image> real_lr);

  LogRow step();
  void run(const RunOptions& options = {}, const StepHook& hook = {});

  int iteration() const { return iter_; }
  int final_iteration() const { return cfg_.pretrain_iters + cfg_.total_iters; }
  Checkpoint checkpoint() const;
  void restore(const Checkpoint& ckpt);

  const TrainConfig& config() const { return cfg_; }
  models::Srn& srn() { return *srn_; }
  models::Critic& critic() { return *critic_; }
  double frozen_grad_norm() const { return frozen_norm_; }

 private:
  objectives::SrnBatch sample_batch();

  TrainConfig cfg_;
  data::PseudoPairSet source_;
  std::vector<Image> real_lr_;
  std::unique_ptr<models::Srn> srn_;
  std::unique_ptr<models::Critic> critic_;
  std::unique_ptr<models::FeatureExtractor> phi_;
  std::unique_ptr<Adam> opt_g_;
  std::unique_ptr<Adam> opt_d_;
  std::mt19937_64 rng_;
  int iter_ = 0;
  double frozen_norm_ = 0.0;
};

Checkpoint train_dsn(const data::UnpairedDataset& dataset, const TrainConfig& cfg,
                     const RunOptions& options = {});
Checkpoint train_srn(const data::PseudoPairSet& pairs, const std::vector<Image>& real_lr,
                     const TrainConfig& cfg, const RunOptions& options = {});

// Networks rebuilt from a checkpoint's config snapshot.
std::unique_ptr<models::Dsn> load_dsn(const Checkpoint& ckpt, int image_channels);
std::unique_ptr<models::Critic> load_critic(const Checkpoint& ckpt, int image_channels);
std::unique_ptr<models::Srn> load_srn(const Checkpoint& ckpt, int image_channels);

// Model-init seeds derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace dasr::training
