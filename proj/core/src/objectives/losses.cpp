#include "dasr/objectives/losses.hpp"

#include <algorithm>
#include <cmath>

#include "dasr/error.hpp"
#include "dasr/imaging/resample.hpp"

namespace dasr::objectives {

void LossWeights::validate() const {
  DASR_REQUIRE(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0, "loss weights must be non-negative");
}

namespace {

void check_scores(std::span<const double> scores) {
  DASR_REQUIRE(!scores.empty(), "empty score map");
  for (double s : scores)
    DASR_REQUIRE(s >= 0.0 && s <= 1.0, "scores must be probabilities in [0, 1]");
}

double mean_log(std::span<const double> scores, bool complement) {
  double acc = 0.0;
  for (double s : scores) {
    const double c = std::clamp(s, kScoreEps, 1.0 - kScoreEps);
    acc += std::log(complement ? 1.0 - c : c);
  }
  return acc / static_cast<double>(scores.size());
}

}  // namespace

double content_loss(const Image& pred, const Image& target) {
  DASR_REQUIRE(pred.same_shape(target), "content_loss: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred.values()[i] - target.values()[i]);
  return acc / static_cast<double>(pred.size());
}

double perceptual_loss(const Image& pred, const Image& target, models::FeatureExtractor& phi) {
  DASR_REQUIRE(pred.same_shape(target), "perceptual_loss: shape mismatch");
  return perceptual_loss(nn::constant(nn::image_tensor(pred)), nn::constant(nn::image_tensor(target)),
                         phi)
      ->value.item();
}

double adv_loss_generator(std::span<const double> fake_scores, GanForm form) {
  check_scores(fake_scores);
  return form == GanForm::paper ? mean_log(fake_scores, true) : -mean_log(fake_scores, false);
}

double adv_loss_discriminator(std::span<const double> real_scores,
                              std::span<const double> fake_scores, GanForm form) {
  check_scores(real_scores);
  check_scores(fake_scores);
  if (form == GanForm::paper) return mean_log(real_scores, true) + mean_log(fake_scores, false);
  return -mean_log(real_scores, false) - mean_log(fake_scores, true);
}

Var content_loss(const Var& pred, const Var& target) { return nn::weighted_l1(pred, target); }

Var perceptual_loss(const Var& pred, const Var& target, models::FeatureExtractor& phi) {
  return nn::weighted_l1(phi.forward(pred), phi.forward(target));
}

Var adv_generator(const Var& fake_logits, GanForm form) {
  if (form == GanForm::paper) return nn::mean_log_one_minus_prob(fake_logits, kScoreEps);
  return nn::scale(nn::mean_log_prob(fake_logits, kScoreEps), -1.0);
}

Var adv_discriminator(const Var& real_logits, const Var& fake_logits, GanForm form) {
  if (form == GanForm::paper)
    return nn::sum_scalars({{1.0, nn::mean_log_one_minus_prob(real_logits, kScoreEps)},
                            {1.0, nn::mean_log_prob(fake_logits, kScoreEps)}});
  return nn::sum_scalars({{-1.0, nn::mean_log_prob(real_logits, kScoreEps)},
                          {-1.0, nn::mean_log_one_minus_prob(fake_logits, kScoreEps)}});
}

Tensor resize_weight_map(const Tensor& weight, int h, int w) {
  const auto& s = weight.shape();
  DASR_REQUIRE(s.c == 1, "weight maps must be single-channel");
  if (s.h == h && s.w == w) return weight;
  Tensor out({s.n, 1, h, w});
  for (int n = 0; n < s.n; ++n) {
    Image plane = bilinear_resize(nn::tensor_image(weight, n), h, w);
    std::copy(plane.values().begin(), plane.values().end(), out.data() + out.offset(n, 0, 0, 0));
  }
  return out;
}

SupervisedTerms weighted_supervised_loss(const Var& pred, const Tensor& target,
                                         const Tensor& weight, models::FeatureExtractor& phi) {
  const auto& ps = pred->value.shape();
  if (!(ps == target.shape()))
    throw InvalidArgument("weighted_supervised_loss: prediction " + nn::to_string(ps) +
                          " vs target " + nn::to_string(target.shape()));
  if (!weight.empty()) {
    const auto& ws = weight.shape();
    DASR_REQUIRE(ws.n == ps.n && ws.c == 1, "weighted_supervised_loss: weight map batch/channel mismatch");
  }
  const Var tgt = nn::constant(target);
  Tensor w_pix = weight.empty() ? Tensor() : resize_weight_map(weight, ps.h, ps.w);
  SupervisedTerms out;
  out.con = nn::weighted_l1(pred, tgt, w_pix);
  Var fp = phi.forward(pred);
  Var ft = phi.forward(tgt);
  const auto& fs = fp->value.shape();
  Tensor w_feat = weight.empty() ? Tensor() : resize_weight_map(weight, fs.h, fs.w);
  out.per = nn::weighted_l1(fp, ft, w_feat);
  return out;
}

DsnLoss dsn_total_loss(const DsnBatch& batch, models::Dsn& dsn, models::Critic& critic,
                       models::FeatureExtractor& phi, const LossWeights& weights, GanForm form) {
  weights.validate();
  DsnLoss out;
  out.generated = dsn.forward(nn::constant(batch.input));
  if (!(out.generated->value.shape() == batch.bicubic_lr.shape()))
    throw InvalidArgument("dsn_total_loss: DSN output " + nn::to_string(out.generated->value.shape()) +
                          " does not match bicubic target " + nn::to_string(batch.bicubic_lr.shape()));
  const Var yb = nn::constant(batch.bicubic_lr);
  out.con = content_loss(out.generated, yb);
  out.per = perceptual_loss(out.generated, yb, phi);
  out.adv = adv_generator(critic.logits(out.generated), form);
  out.total = nn::sum_scalars({{weights.alpha, out.con}, {weights.beta, out.per}, {weights.gamma, out.adv}});
  return out;
}

SrnLoss srn_total_loss(const SrnBatch& batch, models::Srn& srn, models::Critic& critic_hr,
                       models::FeatureExtractor& phi, const LossWeights& weights,
                       bool domain_gap_aware, GanForm form) {
  weights.validate();
  SrnLoss out;
  const Var sr_source = srn.forward(nn::constant(batch.source_lr));
  const SupervisedTerms sup = weighted_supervised_loss(sr_source, batch.source_hr, batch.weight, phi);
  out.con = sup.con;
  out.per = sup.per;
  out.adversarial_input = domain_gap_aware ? srn.forward(nn::constant(batch.target_lr)) : sr_source;
  out.adv = adv_generator(critic_hr.logits(out.adversarial_input), form);
  out.total = nn::sum_scalars({{weights.alpha, out.con}, {weights.beta, out.per}, {weights.gamma, out.adv}});
  return out;
}

}  // namespace dasr::objectives
