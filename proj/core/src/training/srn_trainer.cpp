#include <algorithm>

#include "common.hpp"
#include "dasr/nn/ops.hpp"
#include "dasr/objectives/losses.hpp"
#include "dasr/training/trainers.hpp"

namespace dasr::training {

namespace {
enum Stream : std::uint64_t { kSampler = 0, kSrn = 2, kDisc = 3 };
}

SrnTrainer::SrnTrainer(const TrainConfig& cfg, data::PseudoPairSet source, std::vector<Image> real_lr)
    : cfg_(cfg), source_(std::move(source)), real_lr_(std::move(real_lr)),
      rng_(derive_seed(cfg.seed, kSampler)) {
  DASR_REQUIRE(cfg_.phase == Phase::srn, "SRN trainer needs phase = srn");
  cfg_.validate();
  source_.validate();
  DASR_REQUIRE(!real_lr_.empty(), "SRN training needs real LR images");
  if (source_.scale != cfg_.scale)
    throw InvalidArgument("pseudo pairs have scale " + std::to_string(source_.scale) +
                          " but the config asks for " + std::to_string(cfg_.scale));
  const int channels = source_.pairs.front().x_r.channels();
  for (const Image& img : real_lr_)
    DASR_REQUIRE(img.channels() == channels, "real LR images must match the pair channel count");
  srn_ = std::make_unique<models::Srn>(cfg_.srn_model(), channels, derive_seed(cfg_.seed, kSrn));
  critic_ = std::make_unique<models::Critic>(cfg_.freqsep, cfg_.gbfs_sigma, cfg_.disc_model(channels),
                                             derive_seed(cfg_.seed, kDisc));
  phi_ = models::make_feature_extractor(cfg_.features, channels);
  phi_->set_trainable(false);
  opt_g_ = std::make_unique<Adam>(srn_->parameters());
  opt_d_ = std::make_unique<Adam>(critic_->discriminator().parameters());
}

objectives::SrnBatch SrnTrainer::sample_batch() {
  data::PairBatch pb = data::sample_training_batch(source_, rng_, cfg_.patch_hr, cfg_.batch, cfg_.flip);
  objectives::SrnBatch b;
  b.source_lr = std::move(pb.lr);
  b.source_hr = std::move(pb.hr);
  if (cfg_.weighted_supervision) b.weight = std::move(pb.weight);
  b.target_lr = data::sample_crops(real_lr_, rng_, cfg_.patch_lr(), cfg_.batch, 1, cfg_.flip);
  return b;
}

LogRow SrnTrainer::step() {
  DASR_REQUIRE(iter_ < final_iteration(), "SRN training already finished");
  const objectives::SrnBatch batch = sample_batch();
  models::Discriminator& disc = critic_->discriminator();
  LogRow row;
  row.iter = iter_ + 1;
  row.lr = learning_rate_for_step(iter_, cfg_);

  srn_->set_trainable(true);
  disc.set_trainable(false);
  srn_->zero_grad();
  disc.zero_grad();

  if (iter_ < cfg_.pretrain_iters) {
    nn::Var sr = srn_->forward(nn::constant(batch.source_lr));
    const nn::Var target = nn::constant(batch.source_hr);
    nn::Var con = batch.weight.empty() ? objectives::content_loss(sr, target)
                                       : nn::weighted_l1(sr, target, batch.weight);
    row.con = detail::checked(con, "content", row.iter);
    nn::backward(con);
    frozen_norm_ = disc.grad_norm();
    opt_g_->step(row.lr);
  } else {
    objectives::SrnLoss loss = objectives::srn_total_loss(batch, *srn_, *critic_, *phi_, cfg_.loss,
                                                          cfg_.domain_gap_aware, cfg_.gan_form);
    row.con = detail::checked(loss.con, "content", row.iter);
    row.per = detail::checked(loss.per, "perceptual", row.iter);
    row.adv_g = detail::checked(loss.adv, "adversarial", row.iter);
    detail::checked(loss.total, "total", row.iter);
    nn::backward(loss.total);
    frozen_norm_ = disc.grad_norm();
    opt_g_->step(row.lr);

    srn_->set_trainable(false);
    disc.set_trainable(true);
    srn_->zero_grad();
    const nn::Var fake = nn::constant(loss.adversarial_input->value);
    nn::Var ld = objectives::adv_discriminator(critic_->logits(nn::constant(batch.source_hr)),
                                               critic_->logits(fake), cfg_.gan_form);
    row.adv_d = detail::checked(ld, "discriminator", row.iter);
    nn::backward(ld);
    frozen_norm_ = std::max(frozen_norm_, srn_->grad_norm());
    opt_d_->step(row.lr);
    disc.zero_grad();
  }
  srn_->zero_grad();
  ++iter_;
  return row;
}

void SrnTrainer::run(const RunOptions& options, const StepHook& hook) {
  detail::run_trainer(*this, options, hook);
}

Checkpoint SrnTrainer::checkpoint() const {
  Checkpoint c;
  c.phase = Phase::srn;
  c.iteration = static_cast<std::uint64_t>(iter_);
  c.config = cfg_;
  c.rng_state = detail::rng_state(rng_);
  c.extra = {{"image_channels", source_.pairs.front().x_r.channels()},
             {"opt_g_steps", opt_g_->steps()},
             {"opt_d_steps", opt_d_->steps()}};
  append_module(c, "srn", *srn_);
  append_module(c, "disc", critic_->discriminator());
  for (auto& t : opt_g_->state("opt_g.")) c.tensors.push_back(std::move(t));
  for (auto& t : opt_d_->state("opt_d.")) c.tensors.push_back(std::move(t));
  return c;
}

void SrnTrainer::restore(const Checkpoint& ckpt) {
  if (ckpt.phase != Phase::srn) throw InvalidArgument("restore: not an SRN checkpoint");
  detail::require_compatible(ckpt.config, cfg_);
  if (ckpt.iteration > static_cast<std::uint64_t>(final_iteration()))
    throw InvalidArgument("restore: checkpoint is past the configured run length");
  load_module(ckpt, "srn", *srn_);
  load_module(ckpt, "disc", critic_->discriminator());
  opt_g_->load_state(ckpt.tensors, "opt_g.", ckpt.extra.at("opt_g_steps").get<std::uint64_t>());
  opt_d_->load_state(ckpt.tensors, "opt_d.", ckpt.extra.at("opt_d_steps").get<std::uint64_t>());
  detail::set_rng_state(rng_, ckpt.rng_state);
  iter_ = static_cast<int>(ckpt.iteration);
}

Checkpoint train_srn(const data::PseudoPairSet& pairs, const std::vector<Image>& real_lr,
                     const TrainConfig& cfg, const RunOptions& options) {
  SrnTrainer t(cfg, pairs, real_lr);
  t.run(options);
  return t.checkpoint();
}

}  // namespace dasr::training
