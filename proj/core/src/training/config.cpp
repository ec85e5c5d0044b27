#include "dasr/training/config.hpp"

#include <cmath>

#include "dasr/error.hpp"

namespace dasr::training {

using objectives::GanForm;

std::string to_string(Phase p) { return p == Phase::dsn ? "dsn" : "srn"; }
Phase phase_from_string(const std::string& s) {
  if (s == "dsn") return Phase::dsn;
  if (s == "srn") return Phase::srn;
  throw InvalidArgument("unknown phase '" + s + "' (dsn|srn)");
}
std::string to_string(SourceKind k) { return k == SourceKind::pseudo ? "pseudo" : "bicubic"; }
SourceKind source_kind_from_string(const std::string& s) {
  if (s == "pseudo") return SourceKind::pseudo;
  if (s == "bicubic") return SourceKind::bicubic;
  throw InvalidArgument("unknown source_kind '" + s + "' (pseudo|bicubic)");
}
std::string to_string(DsnInput d) { return d == DsnInput::hr ? "hr" : "bicubic"; }
DsnInput dsn_input_from_string(const std::string& s) {
  if (s == "hr") return DsnInput::hr;
  if (s == "bicubic") return DsnInput::bicubic;
  throw InvalidArgument("unknown dsn_input '" + s + "' (hr|bicubic)");
}
std::string to_string(GanForm f) { return f == GanForm::paper ? "paper" : "bce"; }
GanForm gan_form_from_string(const std::string& s) {
  if (s == "paper") return GanForm::paper;
  if (s == "bce") return GanForm::bce;
  throw InvalidArgument("unknown gan_form '" + s + "' (paper|bce)");
}

TrainConfig TrainConfig::dsn_defaults() { return TrainConfig{}; }

TrainConfig TrainConfig::srn_defaults() {
  TrainConfig c;
  c.phase = Phase::srn;
  c.lr_init = 2e-4;
  c.loss = objectives::LossWeights::srn_defaults();
  return c;
}

void TrainConfig::validate() const {
  DASR_REQUIRE(pretrain_iters >= 0, "pretrain_iters must be >= 0");
  DASR_REQUIRE(total_iters >= 0, "total_iters must be >= 0");
  DASR_REQUIRE(pretrain_iters + total_iters >= 1, "at least one training iteration is required");
  DASR_REQUIRE(batch >= 1, "batch must be >= 1");
  DASR_REQUIRE(scale == 1 || scale == 2 || scale == 4, "scale must be 1, 2 or 4");
  DASR_REQUIRE(patch_hr >= 2 && patch_hr % (2 * scale) == 0,
               "patch_hr must be a positive multiple of 2 * scale");
  DASR_REQUIRE(lr_init > 0.0 && std::isfinite(lr_init), "lr_init must be positive");
  DASR_REQUIRE(lr_halve_every >= 1, "lr_halve_every must be >= 1");
  DASR_REQUIRE(gbfs_sigma > 0.0, "gbfs_sigma must be positive");
  DASR_REQUIRE(w_min >= 0.0 && w_min < 1.0, "w_min must be in [0, 1)");
  DASR_REQUIRE(checkpoint_every >= 0, "checkpoint_every must be >= 0");
  loss.validate();
  dsn_model().validate();
  srn_model().validate();
  disc_model(3).validate();
  features.validate();
}

int TrainConfig::checkpoint_interval() const {
  return checkpoint_every > 0 ? checkpoint_every : std::max(1, total_iters / 10);
}

models::DsnConfig TrainConfig::dsn_model() const {
  models::DsnConfig d = dsn;
  d.scale = dsn_input == DsnInput::bicubic ? 1 : scale;
  return d;
}

models::SrnConfig TrainConfig::srn_model() const {
  models::SrnConfig s = srn;
  s.scale = scale;
  return s;
}

models::DiscConfig TrainConfig::disc_model(int image_channels) const {
  models::DiscConfig d = disc;
  d.in_channels = models::Critic::disc_channels(freqsep, image_channels);
  return d;
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  nlohmann::json disc = c.disc;
  disc.erase("in_channels");
  j = {{"phase", to_string(c.phase)},
       {"pretrain_iters", c.pretrain_iters},
       {"total_iters", c.total_iters},
       {"batch", c.batch},
       {"patch_hr", c.patch_hr},
       {"lr_init", c.lr_init},
       {"lr_halve_every", c.lr_halve_every},
       {"loss", {{"alpha", c.loss.alpha}, {"beta", c.loss.beta}, {"gamma", c.loss.gamma}}},
       {"flags",
        {{"domain_gap_aware", c.domain_gap_aware},
         {"weighted_supervision", c.weighted_supervision},
         {"source_kind", to_string(c.source_kind)},
         {"freqsep", models::to_string(c.freqsep)},
         {"dsn_input", to_string(c.dsn_input)}}},
       {"gan_form", to_string(c.gan_form)},
       {"gbfs_sigma", c.gbfs_sigma},
       {"w_min", c.w_min},
       {"flip", c.flip},
       {"scale", c.scale},
       {"seed", c.seed},
       {"checkpoint_every", c.checkpoint_every},
       {"model",
        {{"dsn", {{"n_res_blocks", c.dsn.n_res_blocks}, {"channels", c.dsn.channels}}},
         {"srn",
          {{"n_rrdb_blocks", c.srn.n_rrdb_blocks},
           {"channels", c.srn.channels},
           {"growth_channels", c.srn.growth_channels}}},
         {"disc", disc},
         {"features", c.features}}}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  c.phase = phase_from_string(j.at("phase").get<std::string>());
  j.at("pretrain_iters").get_to(c.pretrain_iters);
  j.at("total_iters").get_to(c.total_iters);
  j.at("batch").get_to(c.batch);
  j.at("patch_hr").get_to(c.patch_hr);
  j.at("lr_init").get_to(c.lr_init);
  j.at("lr_halve_every").get_to(c.lr_halve_every);
  const auto& loss = j.at("loss");
  loss.at("alpha").get_to(c.loss.alpha);
  loss.at("beta").get_to(c.loss.beta);
  loss.at("gamma").get_to(c.loss.gamma);
  const auto& flags = j.at("flags");
  flags.at("domain_gap_aware").get_to(c.domain_gap_aware);
  flags.at("weighted_supervision").get_to(c.weighted_supervision);
  c.source_kind = source_kind_from_string(flags.at("source_kind").get<std::string>());
  c.freqsep = models::freqsep_from_string(flags.at("freqsep").get<std::string>());
  c.dsn_input = dsn_input_from_string(flags.at("dsn_input").get<std::string>());
  c.gan_form = gan_form_from_string(j.at("gan_form").get<std::string>());
  j.at("gbfs_sigma").get_to(c.gbfs_sigma);
  j.at("w_min").get_to(c.w_min);
  j.at("flip").get_to(c.flip);
  j.at("scale").get_to(c.scale);
  j.at("seed").get_to(c.seed);
  j.at("checkpoint_every").get_to(c.checkpoint_every);
  const auto& model = j.at("model");
  model.at("dsn").at("n_res_blocks").get_to(c.dsn.n_res_blocks);
  model.at("dsn").at("channels").get_to(c.dsn.channels);
  model.at("srn").at("n_rrdb_blocks").get_to(c.srn.n_rrdb_blocks);
  model.at("srn").at("channels").get_to(c.srn.channels);
  model.at("srn").at("growth_channels").get_to(c.srn.growth_channels);
  nlohmann::json disc = model.at("disc");
  disc["in_channels"] = c.disc.in_channels;
  disc.get_to(c.disc);
  model.at("features").get_to(c.features);
  c.dsn.scale = c.dsn_model().scale;
  c.srn.scale = c.scale;
}

double learning_rate_at(int iter, const TrainConfig& cfg) {
  DASR_REQUIRE(iter >= 0, "learning_rate_at: iteration must be >= 0");
  return std::ldexp(cfg.lr_init, -(iter / cfg.lr_halve_every));
}

double learning_rate_for_step(int step, const TrainConfig& cfg) {
  if (step < cfg.pretrain_iters) return cfg.lr_init;
  return learning_rate_at(step - cfg.pretrain_iters, cfg);
}

}  // namespace dasr::training
