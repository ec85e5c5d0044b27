#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "dasr/error.hpp"
#include "dasr/evaluation/harness.hpp"
#include "dasr/evaluation/metrics.hpp"
#include "dasr/imaging/png_io.hpp"
#include "test_support.hpp"

using namespace dasr;
using namespace dasr::evaluation;
using dasr::testing::random_image;

namespace {

Image add_noise(const Image& img, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  Image out = img;
  for (double& v : out.values()) v += n(rng);
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Psnr, Examples) {
  std::mt19937_64 rng(1);
  const Image a = random_image(rng, 8, 8, 3);
  EXPECT_EQ(psnr(a, a), 100.0);
  // MSE exactly 0.01: |delta| = 0.1 everywhere.
  Image b = a;
  for (double& v : b.values()) v -= 0.1;
  EXPECT_NEAR(psnr(a, b), 20.0, 1e-9);
  EXPECT_NEAR(psnr(Image(4, 4, 1, 0.5), Image(4, 4, 1, 0.0)), 6.0206, 1e-4);
  EXPECT_THROW(psnr(a, Image(8, 7, 3)), InvalidArgument);
}

TEST(Psnr, OracleSymmetryAndMonotonicity) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const Image a = random_image(rng, 12, 10, 3), b = random_image(rng, 12, 10, 3);
    EXPECT_NEAR(psnr(a, b), dasr::testing::oracle_psnr(a, b), 1e-8);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
  }
  const Image base = random_image(rng, 32, 32, 3);
  double last = 101.0;
  for (double sigma : {0.001, 0.01, 0.05, 0.1, 0.2}) {
    std::mt19937_64 noise_rng(3);
    const double p = psnr(base, add_noise(base, sigma, noise_rng));
    EXPECT_LT(p, last);
    last = p;
  }
}

TEST(Ssim, Examples) {
  std::mt19937_64 rng(4);
  const Image a = random_image(rng, 16, 16, 3);
  EXPECT_EQ(ssim(a, a), 1.0);
  const double c = 0.3, d = 0.2, c1 = 1e-4, c2 = 9e-4;
  const double closed = (2 * c * (c + d) + c1) * c2 / ((c * c + (c + d) * (c + d) + c1) * c2);
  EXPECT_NEAR(ssim(Image(16, 16, 1, c), Image(16, 16, 1, c + d)), closed, 1e-12);
  Image shifted = a;
  for (double& v : shifted.values()) v += 0.05;
  EXPECT_LT(ssim(a, shifted), 1.0);
  EXPECT_THROW(ssim(Image(10, 16, 1), Image(10, 16, 1)), InvalidArgument);
  EXPECT_THROW(ssim(a, Image(16, 16, 1)), InvalidArgument);
}

TEST(Ssim, MatchesSlidingWindowOracle) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const Image a = random_image(rng, 20, 17, 3);
    const Image b = add_noise(a, 0.1, rng);
    EXPECT_NEAR(ssim(a, b), dasr::testing::oracle_ssim(a, b), 1e-6);
    EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-15);
  }
}

TEST(Luma, Bt601) {
  Image rgb(1, 1, 3);
  rgb.at(0, 0, 0) = 1.0;
  rgb.at(1, 0, 0) = 0.5;
  rgb.at(2, 0, 0) = 0.25;
  EXPECT_NEAR(luma(rgb).at(0, 0, 0), 0.299 + 0.2935 + 0.0285, 1e-15);
  EXPECT_THROW(luma(Image(2, 2, 2)), InvalidArgument);
}

TEST(FeatureDistance, Axioms) {
  models::FeatureConfig fc;
  fc.channels = {4, 4};
  FeatureDistance d(models::make_feature_extractor(fc, 3));
  EXPECT_EQ(d.name(), "feature_l1");
  std::mt19937_64 rng(6);
  const Image a = random_image(rng, 16, 16, 3), b = random_image(rng, 16, 16, 3);
  EXPECT_EQ(d.distance(a, a), 0.0);
  EXPECT_EQ(d.distance(a, b), d.distance(b, a));
  EXPECT_GT(d.distance(a, b), 0.0);
  EXPECT_THROW(FeatureDistance(nullptr), InvalidArgument);
}

TEST(Aggregate, PopulationStatistics) {
  const Aggregate a = aggregate({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(a.mean, 2.5);
  EXPECT_DOUBLE_EQ(a.std, std::sqrt(1.25));
  EXPECT_EQ(a.count, 4u);
  EXPECT_EQ(aggregate({}).count, 0u);
}

TEST(Harness, SelfComparison) {
  dasr::testing::TempDir dir;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3; ++i) save_image(random_image(rng, 16, 16, 3), dir / ("im" + std::to_string(i) + ".png"));
  const EvalReport r = evaluate_directory(dir.path(), dir.path());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.psnr_stats().mean, 100.0);
  EXPECT_EQ(r.ssim_stats().mean, 1.0);
  EXPECT_FALSE(r.perceptual_stats().has_value());
  EXPECT_NE(r.to_csv().find("unavailable"), std::string::npos);
}

TEST(Harness, PartialFailuresAndReportAggregates) {
  dasr::testing::TempDir sr, gt;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 4; ++i) {
    const Image g = random_image(rng, 16, 16, 3);
    save_image(g, gt / ("im" + std::to_string(i) + ".png"));
    if (i != 2) save_image(quantize_8bit(add_noise(g, 0.05, rng)), sr / ("im" + std::to_string(i) + ".png"));
  }
  save_image(random_image(rng, 12, 16, 3), sr / "im3.png");
  std::ofstream(sr / "bad.png") << "not a png";
  save_image(random_image(rng, 16, 16, 3), gt / "bad.png");

  models::FeatureConfig fc;
  fc.channels = {4};
  FeatureDistance fd(models::make_feature_extractor(fc, 3));
  const EvalReport r = evaluate_directory(sr.path(), gt.path(), {&fd, 2});
  EXPECT_FALSE(r.ok());
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].name, "im0");
  EXPECT_EQ(r.records[1].name, "im1");
  std::vector<std::string> err_names;
  for (const auto& e : r.errors) err_names.push_back(e.name);
  EXPECT_EQ(err_names, (std::vector<std::string>{"bad", "im2", "im3"}));

  // Recompute the aggregates from the serialized rows.
  double sum = 0.0, mean_row = -1.0;
  int images = 0;
  for (const auto& row : parse_csv(r.to_csv())) {
    if (row[0] == "image") {
      sum += std::stod(row[2]);
      ++images;
      EXPECT_NE(row[4], "unavailable");
    }
    if (row[0] == "mean") mean_row = std::stod(row[2]);
  }
  EXPECT_EQ(images, 2);
  EXPECT_NEAR(mean_row, sum / images, 1e-9);
  EXPECT_NEAR(r.psnr_stats().mean, (r.records[0].psnr + r.records[1].psnr) / 2, 1e-12);
  ASSERT_TRUE(r.perceptual_stats().has_value());
  EXPECT_EQ(r.perceptual_stats()->count, 2u);

  r.write(sr / "out" / "report.csv");
  std::ifstream f(sr / "out" / "report.csv");
  std::string first, header;
  std::getline(f, first);
  std::getline(f, header);
  EXPECT_EQ(first.rfind("# config ", 0), 0u);
  EXPECT_EQ(header, "kind,name,psnr_db,ssim,perceptual");
}

TEST(Harness, MissingDirectories) {
  dasr::testing::TempDir dir;
  EXPECT_THROW(evaluate_directory(dir / "none", dir.path()), IoError);
}
