#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "dasr/adaptation/domain_distance.hpp"
#include "dasr/error.hpp"
#include "test_support.hpp"

using namespace dasr;
using namespace dasr::adaptation;
using dasr::testing::random_image;

namespace {

models::Critic make_critic(std::uint64_t seed = 3, int padding = 1) {
  models::DiscConfig d;
  d.channels = {4, 8, 8, 1};
  d.in_channels = 9;
  d.padding = padding;
  return models::Critic(models::FreqSep::wavelet, 1.0, d, seed);
}

void set_constant_logit(models::Critic& c, double logit) {
  auto& last = c.discriminator().last_layer();
  last.weight->value.fill(0.0);
  last.bias->value.fill(logit);
}

}  // namespace

TEST(DomainDistance, ConstantLogits) {
  std::mt19937_64 rng(1);
  const Image y = random_image(rng, 16, 16, 3);
  auto critic = make_critic();
  set_constant_logit(critic, 0.0);
  const Image half = domain_distance_map(critic, y, 64, 64);
  ASSERT_EQ(half.height(), 64);
  ASSERT_EQ(half.channels(), 1);
  for (double v : half.values()) EXPECT_EQ(v, 0.5);
  set_constant_logit(critic, std::log(7.0 / 3.0));
  for (double v : domain_distance_map(critic, y, 48, 40).values()) EXPECT_NEAR(v, 0.7, 1e-15);
}

TEST(DomainDistance, ShapeIndependentOfScoreGrid) {
  std::mt19937_64 rng(2);
  auto critic = make_critic();
  for (int s : {16, 24, 40}) {
    const Image m = domain_distance_map(critic, random_image(rng, s, s, 3), 100, 60);
    EXPECT_EQ(m.height(), 100);
    EXPECT_EQ(m.width(), 60);
    EXPECT_EQ(m.channels(), 1);
  }
}

TEST(DomainDistance, StrictlyInsideUnitInterval) {
  std::mt19937_64 rng(3);
  const Image y = random_image(rng, 16, 16, 3);
  auto critic = make_critic();
  for (double logit : {-80.0, 80.0}) {
    set_constant_logit(critic, logit);
    for (double v : domain_distance_map(critic, y, 64, 64).values()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
  auto raw = make_critic(9);
  for (double v : domain_distance_map(raw, y, 64, 64).values()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(DomainDistance, MonotoneInLogits) {
  std::mt19937_64 rng(4);
  const Image y = random_image(rng, 16, 16, 3);
  auto critic = make_critic(5);
  const Image before = domain_distance_map(critic, y, 64, 64);
  critic.discriminator().last_layer().bias->value[0] += 0.3;
  const Image after = domain_distance_map(critic, y, 64, 64);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_GE(after.values()[i], before.values()[i]);
}

TEST(DomainDistance, DeterministicAndFloor) {
  std::mt19937_64 rng(5);
  const Image y = random_image(rng, 16, 16, 3);
  auto critic = make_critic(6);
  EXPECT_EQ(domain_distance_map(critic, y, 64, 64), domain_distance_map(critic, y, 64, 64));
  set_constant_logit(critic, -5.0);
  for (double v : domain_distance_map(critic, y, 64, 64, 0.2).values()) EXPECT_EQ(v, 0.2);
  EXPECT_THROW(domain_distance_map(critic, y, 64, 64, 1.0), InvalidArgument);
  EXPECT_THROW(domain_distance_map(critic, y, 0, 64), InvalidArgument);
}

TEST(DomainDistance, TooSmallForOnePatch) {
  auto valid = make_critic(1, 0);
  std::mt19937_64 rng(6);
  // Wavelet separation halves the input, so 44 px gives 22 < 23.
  EXPECT_THROW(domain_distance_map(valid, random_image(rng, 44, 60, 3), 176, 240), InvalidArgument);
  EXPECT_NO_THROW(domain_distance_map(valid, random_image(rng, 46, 46, 3), 184, 184));
}

TEST(WeightSidecar, RoundTripAndErrors) {
  dasr::testing::TempDir dir;
  std::mt19937_64 rng(7);
  const Image w = random_image(rng, 12, 9, 1);
  save_weight_sidecar(w, dir / "w.wmap");
  EXPECT_EQ(load_weight_sidecar(dir / "w.wmap"), w);
  EXPECT_THROW(save_weight_sidecar(random_image(rng, 4, 4, 3), dir / "x.wmap"), InvalidArgument);
  EXPECT_THROW(load_weight_sidecar(dir / "none.wmap"), IoError);
  std::ofstream(dir / "bad.wmap") << "XXXX0000000000000";
  EXPECT_THROW(load_weight_sidecar(dir / "bad.wmap"), FormatError);
  // Truncate the payload.
  std::filesystem::resize_file(dir / "w.wmap", 40);
  EXPECT_THROW(load_weight_sidecar(dir / "w.wmap"), FormatError);
}
