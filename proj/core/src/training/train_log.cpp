#include "dasr/training/train_log.hpp"

#include <cstdio>
#include <sstream>

#include "dasr/error.hpp"

namespace dasr::training {

const char* TrainLog::header() { return "iter,lr,con,per,adv_g,adv_d,wall_time"; }

TrainLog::TrainLog(const std::filesystem::path& path) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  out_.open(path, std::ios::app);
  if (!out_) throw IoError("cannot open training log " + path.string());
  if (fresh) out_ << header() << "\n";
}

void TrainLog::write(const LogRow& r) {
  if (!out_.is_open()) return;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.3f\n", r.iter, r.lr, r.con, r.per,
                r.adv_g, r.adv_d, r.wall_time);
  out_ << buf;
  out_.flush();
}

std::vector<LogRow> TrainLog::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read training log " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != header()) throw FormatError("training log has unexpected header: " + line);
  std::vector<LogRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    LogRow r;
    if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf,%lf", &r.iter, &r.lr, &r.con, &r.per,
                    &r.adv_g, &r.adv_d, &r.wall_time) != 7)
      throw FormatError("malformed training log line: " + line);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace dasr::training
