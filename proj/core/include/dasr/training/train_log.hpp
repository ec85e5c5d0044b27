#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace dasr::training {

struct LogRow {
  int iter = 0;
  double lr = 0.0;
  double con = 0.0;
  double per = 0.0;
  double adv_g = 0.0;
  double adv_d = 0.0;
  double wall_time = 0.0;
};

// Append-only CSV: iter,lr,con,per,adv_g,adv_d,wall_time
class TrainLog {
 public:
  TrainLog() = default;
  explicit TrainLog(const std::filesystem::path& path);

  void write(const LogRow& row);
  bool is_open() const { return out_.is_open(); }

  static const char* header();
  static std::vector<LogRow> read(const std::filesystem::path& path);

 private:
  std::ofstream out_;
};

}  // namespace dasr::training
