#pragma once

#include <cstdint>
#include <string>

#include "dasr/models/config.hpp"
#include "dasr/objectives/losses.hpp"
#include "json.hpp"

namespace dasr::training {

enum class Phase { dsn, srn };
// Where the SRN's labelled LR comes from.
enum class SourceKind { pseudo, bicubic };
// What the DSN consumes. `bicubic` feeds B(x) to a scale-1 network.
enum class DsnInput { hr, bicubic };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& s);
std::string to_string(SourceKind k);
SourceKind source_kind_from_string(const std::string& s);
std::string to_string(DsnInput d);
DsnInput dsn_input_from_string(const std::string& s);
std::string to_string(objectives::GanForm f);
objectives::GanForm gan_form_from_string(const std::string& s);

struct TrainConfig {
  Phase phase = Phase::dsn;
  int pretrain_iters = 25000;
  int total_iters = 50000;  // adversarial iterations after pretraining
  int batch = 16;
  int patch_hr = 192;
  double lr_init = 1e-4;
  int lr_halve_every = 10000;
  objectives::LossWeights loss = objectives::LossWeights::dsn_defaults();

  bool domain_gap_aware = true;
  bool weighted_supervision = true;
  SourceKind source_kind = SourceKind::pseudo;
  models::FreqSep freqsep = models::FreqSep::wavelet;
  DsnInput dsn_input = DsnInput::hr;
  objectives::GanForm gan_form = objectives::GanForm::paper;
  double gbfs_sigma = 1.0;
  double w_min = 0.0;
  bool flip = true;

  int scale = 4;
  std::uint64_t seed = 0;
  // 0 means max(1, total_iters / 10).
  int checkpoint_every = 0;

  // Model scale fields are derived from `scale` and `dsn_input`.
  models::DsnConfig dsn;
  models::SrnConfig srn;
  models::DiscConfig disc;
  models::FeatureConfig features;

  static TrainConfig dsn_defaults();
  static TrainConfig srn_defaults();

  void validate() const;
  int checkpoint_interval() const;
  int patch_lr() const { return patch_hr / scale; }
  // Architectures with scale and discriminator input channels filled in.
  models::DsnConfig dsn_model() const;
  models::SrnConfig srn_model() const;
  models::DiscConfig disc_model(int image_channels) const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);
void from_json(const nlohmann::json& j, TrainConfig& c);

// lr_init * 2^-floor(iter / lr_halve_every), with `iter` counted from the
// start of the adversarial phase. Pretraining runs at lr_init.
double learning_rate_at(int iter, const TrainConfig& cfg);
// Same schedule indexed by the global step (pretraining included).
double learning_rate_for_step(int step, const TrainConfig& cfg);

}  // namespace dasr::training
