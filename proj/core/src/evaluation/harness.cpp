#include "dasr/evaluation/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "dasr/data/dataset.hpp"
#include "dasr/error.hpp"
#include "dasr/imaging/png_io.hpp"

namespace dasr::evaluation {

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  a.count = values.size();
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  a.std = std::sqrt(ss / static_cast<double>(values.size()));
  return a;
}

Aggregate EvalReport::psnr_stats() const {
  std::vector<double> v;
  for (const auto& r : records) v.push_back(r.psnr);
  return aggregate(v);
}

Aggregate EvalReport::ssim_stats() const {
  std::vector<double> v;
  for (const auto& r : records) v.push_back(r.ssim);
  return aggregate(v);
}

std::optional<Aggregate> EvalReport::perceptual_stats() const {
  if (perceptual_name.empty()) return std::nullopt;
  std::vector<double> v;
  for (const auto& r : records)
    if (r.perceptual) v.push_back(*r.perceptual);
  return aggregate(v);
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Names and messages are quoted when they would break the column layout.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string EvalReport::to_csv() const {
  std::string out = "# config " + config.dump() + "\n";
  out += "kind,name,psnr_db,ssim,perceptual\n";
  const std::string unavailable = "unavailable";
  for (const auto& r : records)
    out += "image," + field(r.name) + "," + num(r.psnr) + "," + num(r.ssim) + "," +
           (r.perceptual ? num(*r.perceptual) : unavailable) + "\n";
  const Aggregate p = psnr_stats(), s = ssim_stats();
  const auto q = perceptual_stats();
  out += "mean,," + num(p.mean) + "," + num(s.mean) + "," + (q ? num(q->mean) : unavailable) + "\n";
  out += "std,," + num(p.std) + "," + num(s.std) + "," + (q ? num(q->std) : unavailable) + "\n";
  out += "count,," + std::to_string(p.count) + "," + std::to_string(s.count) + "," +
         (q ? std::to_string(q->count) : unavailable) + "\n";
  for (const auto& e : errors) out += "error," + field(e.name) + ",,," + field(e.message) + "\n";
  return out;
}

void EvalReport::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw IoError("cannot write report " + path.string());
  f << to_csv();
}

EvalReport evaluate_directory(const std::filesystem::path& sr_dir, const std::filesystem::path& gt_dir,
                              const EvalOptions& options) {
  std::map<std::string, std::filesystem::path> sr, gt;
  for (const auto& p : data::list_png_files(sr_dir)) sr[p.stem().string()] = p;
  for (const auto& p : data::list_png_files(gt_dir)) gt[p.stem().string()] = p;

  EvalReport report;
  report.config = {{"sr_dir", sr_dir.string()}, {"gt_dir", gt_dir.string()},
                   {"ssim", {{"window", 11}, {"sigma", 1.5}, {"k1", 0.01}, {"k2", 0.03}, {"luma", "bt601"}}},
                   {"psnr_cap_db", kPsnrCap}};
  if (options.perceptual) report.perceptual_name = options.perceptual->name();
  report.config["perceptual"] = options.perceptual ? report.perceptual_name : "unavailable";

  std::set<std::string> names;
  for (const auto& [n, p] : sr) names.insert(n);
  for (const auto& [n, p] : gt) names.insert(n);
  std::vector<std::string> todo;
  for (const auto& n : names) {
    if (!sr.count(n)) report.errors.push_back({n, "missing from SR directory"});
    else if (!gt.count(n)) report.errors.push_back({n, "missing from ground-truth directory"});
    else todo.push_back(n);
  }

  std::vector<std::optional<ImageRecord>> results(todo.size());
  std::vector<std::string> failures(todo.size());
  auto score = [&](std::size_t i) {
    try {
      const Image a = load_image(sr.at(todo[i]));
      const Image b = load_image(gt.at(todo[i]));
      if (!a.same_shape(b))
        throw InvalidArgument("shape mismatch: " + std::to_string(a.height()) + "x" +
                              std::to_string(a.width()) + "x" + std::to_string(a.channels()) + " vs " +
                              std::to_string(b.height()) + "x" + std::to_string(b.width()) + "x" +
                              std::to_string(b.channels()));
      ImageRecord r;
      r.name = todo[i];
      r.psnr = psnr(a, b);
      r.ssim = ssim(a, b);
      if (options.perceptual) r.perceptual = options.perceptual->distance(a, b);
      results[i] = r;
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  };
  // The perceptual plug-in is not assumed thread-safe.
  const int workers = options.perceptual ? 1 : std::max(1, options.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < todo.size(); ++i) score(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < todo.size(); i += workers) score(i);
      });
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (results[i]) report.records.push_back(*results[i]);
    else report.errors.push_back({todo[i], failures[i]});
  }
  std::sort(report.errors.begin(), report.errors.end(),
            [](const EvalError& a, const EvalError& b) { return a.name < b.name; });
  return report;
}

}  // namespace dasr::evaluation
