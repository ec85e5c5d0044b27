#include <algorithm>

#include "common.hpp"
#include "dasr/imaging/png_io.hpp"
#include "dasr/nn/ops.hpp"
#include "dasr/objectives/losses.hpp"
#include "dasr/training/trainers.hpp"

namespace dasr::training {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

enum Stream : std::uint64_t { kSampler = 0, kDsn = 1, kSrn = 2, kDisc = 3 };

int common_channels(const std::vector<Image>& a, const std::vector<Image>& b) {
  DASR_REQUIRE(!a.empty() && !b.empty(), "training data must not be empty");
  const int c = a.front().channels();
  for (const auto* set : {&a, &b})
    for (const Image& img : *set)
      DASR_REQUIRE(img.channels() == c, "all training images must have the same channel count");
  return c;
}

}  // namespace

DsnTrainer::DsnTrainer(const TrainConfig& cfg, std::vector<Image> real_lr, std::vector<Image> real_hr)
    : cfg_(cfg), real_lr_(std::move(real_lr)), rng_(derive_seed(cfg.seed, kSampler)) {
  DASR_REQUIRE(cfg_.phase == Phase::dsn, "DSN trainer needs phase = dsn");
  cfg_.validate();
  const int channels = common_channels(real_lr_, real_hr);
  std::vector<std::string> names(real_hr.size());
  hr_pairs_ = data::make_bicubic_pairs(real_hr, names, cfg_.scale);
  dsn_ = std::make_unique<models::Dsn>(cfg_.dsn_model(), channels, derive_seed(cfg_.seed, kDsn));
  critic_ = std::make_unique<models::Critic>(cfg_.freqsep, cfg_.gbfs_sigma, cfg_.disc_model(channels),
                                             derive_seed(cfg_.seed, kDisc));
  phi_ = models::make_feature_extractor(cfg_.features, channels);
  phi_->set_trainable(false);
  opt_g_ = std::make_unique<Adam>(dsn_->parameters());
  opt_d_ = std::make_unique<Adam>(critic_->discriminator().parameters());
}

objectives::DsnBatch DsnTrainer::sample_batch(nn::Tensor& real_lr) {
  data::PairBatch pb = data::sample_training_batch(hr_pairs_, rng_, cfg_.patch_hr, cfg_.batch, cfg_.flip);
  real_lr = data::sample_crops(real_lr_, rng_, cfg_.patch_lr(), cfg_.batch, 1, cfg_.flip);
  objectives::DsnBatch b;
  b.input = cfg_.dsn_input == DsnInput::hr ? std::move(pb.hr) : pb.lr;
  b.bicubic_lr = std::move(pb.lr);
  return b;
}

LogRow DsnTrainer::step() {
  DASR_REQUIRE(iter_ < final_iteration(), "DSN training already finished");
  nn::Tensor real_lr;
  const objectives::DsnBatch batch = sample_batch(real_lr);
  models::Discriminator& disc = critic_->discriminator();
  LogRow row;
  row.iter = iter_ + 1;
  row.lr = learning_rate_for_step(iter_, cfg_);

  dsn_->set_trainable(true);
  disc.set_trainable(false);
  dsn_->zero_grad();
  disc.zero_grad();

  if (iter_ < cfg_.pretrain_iters) {
    nn::Var y = dsn_->forward(nn::constant(batch.input));
    nn::Var con = objectives::content_loss(y, nn::constant(batch.bicubic_lr));
    row.con = detail::checked(con, "content", row.iter);
    nn::backward(con);
    frozen_norm_ = disc.grad_norm();
    opt_g_->step(row.lr);
  } else {
    objectives::DsnLoss loss =
        objectives::dsn_total_loss(batch, *dsn_, *critic_, *phi_, cfg_.loss, cfg_.gan_form);
    row.con = detail::checked(loss.con, "content", row.iter);
    row.per = detail::checked(loss.per, "perceptual", row.iter);
    row.adv_g = detail::checked(loss.adv, "adversarial", row.iter);
    detail::checked(loss.total, "total", row.iter);
    nn::backward(loss.total);
    frozen_norm_ = disc.grad_norm();
    opt_g_->step(row.lr);

    dsn_->set_trainable(false);
    disc.set_trainable(true);
    dsn_->zero_grad();
    const nn::Var fake = nn::constant(loss.generated->value);
    nn::Var ld = objectives::adv_discriminator(critic_->logits(nn::constant(real_lr)),
                                               critic_->logits(fake), cfg_.gan_form);
    row.adv_d = detail::checked(ld, "discriminator", row.iter);
    nn::backward(ld);
    frozen_norm_ = std::max(frozen_norm_, dsn_->grad_norm());
    opt_d_->step(row.lr);
    disc.zero_grad();
  }
  dsn_->zero_grad();
  ++iter_;
  return row;
}

void DsnTrainer::run(const RunOptions& options, const StepHook& hook) {
  detail::run_trainer(*this, options, hook);
}

Checkpoint DsnTrainer::checkpoint() const {
  Checkpoint c;
  c.phase = Phase::dsn;
  c.iteration = static_cast<std::uint64_t>(iter_);
  c.config = cfg_;
  c.rng_state = detail::rng_state(rng_);
  c.extra = {{"image_channels", hr_pairs_.pairs.front().x_r.channels()},
             {"opt_g_steps", opt_g_->steps()},
             {"opt_d_steps", opt_d_->steps()}};
  append_module(c, "dsn", *dsn_);
  append_module(c, "disc", critic_->discriminator());
  for (auto& t : opt_g_->state("opt_g.")) c.tensors.push_back(std::move(t));
  for (auto& t : opt_d_->state("opt_d.")) c.tensors.push_back(std::move(t));
  return c;
}

void DsnTrainer::restore(const Checkpoint& ckpt) {
  if (ckpt.phase != Phase::dsn) throw InvalidArgument("restore: not a DSN checkpoint");
  detail::require_compatible(ckpt.config, cfg_);
  if (ckpt.iteration > static_cast<std::uint64_t>(final_iteration()))
    throw InvalidArgument("restore: checkpoint is past the configured run length");
  load_module(ckpt, "dsn", *dsn_);
  load_module(ckpt, "disc", critic_->discriminator());
  opt_g_->load_state(ckpt.tensors, "opt_g.", ckpt.extra.at("opt_g_steps").get<std::uint64_t>());
  opt_d_->load_state(ckpt.tensors, "opt_d.", ckpt.extra.at("opt_d_steps").get<std::uint64_t>());
  detail::set_rng_state(rng_, ckpt.rng_state);
  iter_ = static_cast<int>(ckpt.iteration);
}

Checkpoint train_dsn(const data::UnpairedDataset& dataset, const TrainConfig& cfg,
                     const RunOptions& options) {
  dataset.validate();
  DsnTrainer t(cfg, data::load_images(dataset.real_lr), data::load_images(dataset.real_hr));
  t.run(options);
  return t.checkpoint();
}

namespace {
int checkpoint_channels(const Checkpoint& ckpt, int image_channels) {
  if (ckpt.extra.contains("image_channels")) {
    const int c = ckpt.extra.at("image_channels").get<int>();
    if (image_channels > 0 && c != image_channels)
      throw InvalidArgument("checkpoint was trained on " + std::to_string(c) + "-channel images");
    return c;
  }
  return image_channels;
}
}  // namespace

std::unique_ptr<models::Dsn> load_dsn(const Checkpoint& ckpt, int image_channels) {
  if (ckpt.phase != Phase::dsn) throw InvalidArgument("expected a DSN checkpoint");
  const int c = checkpoint_channels(ckpt, image_channels);
  auto dsn = std::make_unique<models::Dsn>(ckpt.config.dsn_model(), c, 0);
  load_module(ckpt, "dsn", *dsn);
  dsn->set_trainable(false);
  return dsn;
}

std::unique_ptr<models::Critic> load_critic(const Checkpoint& ckpt, int image_channels) {
  const int c = checkpoint_channels(ckpt, image_channels);
  auto critic = std::make_unique<models::Critic>(ckpt.config.freqsep, ckpt.config.gbfs_sigma,
                                                 ckpt.config.disc_model(c), 0);
  load_module(ckpt, "disc", critic->discriminator());
  critic->discriminator().set_trainable(false);
  return critic;
}

std::unique_ptr<models::Srn> load_srn(const Checkpoint& ckpt, int image_channels) {
  if (ckpt.phase != Phase::srn) throw InvalidArgument("expected an SRN checkpoint");
  const int c = checkpoint_channels(ckpt, image_channels);
  auto srn = std::make_unique<models::Srn>(ckpt.config.srn_model(), c, 0);
  load_module(ckpt, "srn", *srn);
  srn->set_trainable(false);
  return srn;
}

}  // namespace dasr::training
