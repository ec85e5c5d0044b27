#pragma once

#include <span>

#include "dasr/imaging/image.hpp"
#include "dasr/models/networks.hpp"
#include "dasr/nn/ops.hpp"

namespace dasr::objectives {

using nn::Tensor;
using nn::Var;

// Scores are clamped to [eps, 1 - eps] before any log.
inline constexpr double kScoreEps = 1e-6;

struct LossWeights {
  double alpha = 0.01;  // content
  double beta = 1.0;    // perceptual
  double gamma = 0.0005;  // adversarial

  static LossWeights dsn_defaults() { return {0.01, 1.0, 0.0005}; }
  static LossWeights srn_defaults() { return {0.01, 1.0, 0.005}; }
  void validate() const;
  friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

// `paper`: generator minimises log(1 - D(fake)); discriminator minimises
// log(1 - D(real)) + log(D(fake)). `bce`: the non-saturating
// binary-cross-entropy pair -log D(fake) and -log D(real) - log(1 - D(fake)).
enum class GanForm { paper, bce };

// --- plain-value forms -------------------------------------------------------

double content_loss(const Image& pred, const Image& target);
double perceptual_loss(const Image& pred, const Image& target, models::FeatureExtractor& phi);
// Scores are probabilities in [0, 1].
double adv_loss_generator(std::span<const double> fake_scores, GanForm form = GanForm::paper);
double adv_loss_discriminator(std::span<const double> real_scores,
                              std::span<const double> fake_scores,
                              GanForm form = GanForm::paper);

// --- differentiable forms ----------------------------------------------------

Var content_loss(const Var& pred, const Var& target);
Var perceptual_loss(const Var& pred, const Var& target, models::FeatureExtractor& phi);
Var adv_generator(const Var& fake_logits, GanForm form);
Var adv_discriminator(const Var& real_logits, const Var& fake_logits, GanForm form);

struct SupervisedTerms {
  Var con;
  Var per;
};

// con = mean |w * (pred - target)| with w (N, 1, H, W) at pred resolution;
// per uses w bilinearly resized to the feature map and broadcast over
// feature channels. Empty `weight` means unit weights.
SupervisedTerms weighted_supervised_loss(const Var& pred, const Tensor& target,
                                         const Tensor& weight, models::FeatureExtractor& phi);

// Per-sample bilinear resize of an (N, 1, H, W) weight map.
Tensor resize_weight_map(const Tensor& weight, int h, int w);

struct DsnBatch {
  Tensor input;      // DSN input, HR (or bicubic LR for the bicubic-input variant)
  Tensor bicubic_lr;  // y^b = B(x^r)
};

struct DsnLoss {
  Var total;
  Var con;
  Var per;
  Var adv;
  Var generated;  // y^g = DSN(input)
};

DsnLoss dsn_total_loss(const DsnBatch& batch, models::Dsn& dsn, models::Critic& critic,
                       models::FeatureExtractor& phi, const LossWeights& weights,
                       GanForm form = GanForm::paper);

struct SrnBatch {
  Tensor source_lr;  // y^g (or y^b)
  Tensor source_hr;  // x^r
  Tensor weight;     // domain distance map at HR resolution, or empty
  Tensor target_lr;  // y^r (unlabelled)
};

struct SrnLoss {
  Var total;
  Var con;
  Var per;
  Var adv;
  Var adversarial_input;  // SRN output that the adversarial term scored
};

// With domain_gap_aware the adversarial term scores SRN(y^r); otherwise it
// falls back to the source domain and scores SRN(y^g).
SrnLoss srn_total_loss(const SrnBatch& batch, models::Srn& srn, models::Critic& critic_hr,
                       models::FeatureExtractor& phi, const LossWeights& weights,
                       bool domain_gap_aware, GanForm form = GanForm::paper);

}  // namespace dasr::objectives
