#pragma once

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

#include "dasr/error.hpp"
#include "dasr/nn/autograd.hpp"
#include "dasr/training/checkpoint.hpp"
#include "dasr/training/train_log.hpp"
#include "dasr/training/trainers.hpp"

namespace dasr::training::detail {

inline double checked(const nn::Var& loss, const char* term, int iter) {
  const double v = loss->value.item();
  if (!std::isfinite(v))
    throw TrainingError(std::string("non-finite ") + term + " loss (" + std::to_string(v) +
                        ") at iteration " + std::to_string(iter));
  return v;
}

template <class Rng>
std::string rng_state(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

template <class Rng>
void set_rng_state(Rng& rng, const std::string& s) {
  std::istringstream is(s);
  is >> rng;
  if (!is) throw FormatError("checkpoint rng state unreadable");
}

// Configs must agree on everything except run length and checkpoint cadence.
inline void require_compatible(const TrainConfig& a, const TrainConfig& b) {
  nlohmann::json ja = a, jb = b;
  for (auto* j : {&ja, &jb}) {
    j->erase("total_iters");
    j->erase("checkpoint_every");
  }
  if (ja != jb) throw InvalidArgument("checkpoint config does not match the trainer config");
}

template <class Trainer>
void run_trainer(Trainer& t, const RunOptions& options, const StepHook& hook,
                 const char* final_name = "final.dasr") {
  TrainLog log;
  if (!options.log_path.empty()) log = TrainLog(options.log_path);
  const int end = options.stop_at < 0 ? t.final_iteration()
                                      : std::min(options.stop_at, t.final_iteration());
  const int every = t.config().checkpoint_interval();
  const auto t0 = std::chrono::steady_clock::now();
  while (t.iteration() < end) {
    LogRow row = t.step();
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.write(row);
    if (hook) hook(row);
    if (options.checkpoint_dir.empty()) continue;
    if (t.iteration() == t.final_iteration())
      save_checkpoint(t.checkpoint(), options.checkpoint_dir / final_name);
    else if (t.iteration() % every == 0)
      save_checkpoint(t.checkpoint(),
                      options.checkpoint_dir / ("ckpt_" + std::to_string(t.iteration()) + ".dasr"));
  }
}

}  // namespace dasr::training::detail
