#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "dasr/error.hpp"
#include "dasr/imaging/filter.hpp"
#include "dasr/imaging/png_io.hpp"
#include "dasr/imaging/resample.hpp"
#include "dasr/imaging/wavelet.hpp"
#include "test_support.hpp"

using namespace dasr;
using dasr::testing::max_abs_diff;
using dasr::testing::random_image;

namespace {

Image from_rows(const std::vector<std::vector<double>>& rows) {
  Image img(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), 1);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) img.at(0, y, x) = rows[y][x];
  return img;
}

// Keys cubic written out from the polynomial, a = -0.5.
double keys(double x) {
  const double a = -0.5;
  x = std::abs(x);
  if (x <= 1) return (a + 2) * x * x * x - (a + 3) * x * x + 1;
  if (x < 2) return a * x * x * x - 5 * a * x * x + 8 * a * x - 4 * a;
  return 0.0;
}

// Dense (out x in) resampling matrix for an antialiased downscale by s <= 1.
std::vector<std::vector<double>> dense_bicubic(int in, int out, double s) {
  std::vector<std::vector<double>> m(out, std::vector<double>(in, 0.0));
  for (int i = 0; i < out; ++i) {
    const double u = (i + 0.5) / s - 0.5;
    double total = 0.0;
    for (int j = -in * 4; j < in * 5; ++j) {
      const double w = s * keys(s * (u - j));
      if (w == 0.0) continue;
      m[i][std::clamp(j, 0, in - 1)] += w;
      total += w;
    }
    for (double& v : m[i]) v /= total;
  }
  return m;
}

}  // namespace

TEST(CubicKernel, PolynomialValues) {
  EXPECT_DOUBLE_EQ(cubic_kernel(0.0), 1.0);
  EXPECT_DOUBLE_EQ(cubic_kernel(1.0), 0.0);
  EXPECT_DOUBLE_EQ(cubic_kernel(0.5), 0.5625);
  EXPECT_DOUBLE_EQ(cubic_kernel(-0.5), 0.5625);
  EXPECT_DOUBLE_EQ(cubic_kernel(1.5), -0.0625);
  EXPECT_DOUBLE_EQ(cubic_kernel(2.0), 0.0);
  EXPECT_DOUBLE_EQ(cubic_kernel(3.7), 0.0);
}

TEST(Bicubic, ConstantIsPreserved) {
  const Image img(32, 24, 3, 0.5);
  const Image out = bicubic_resize(img, {1, 4});
  ASSERT_EQ(out.height(), 8);
  ASSERT_EQ(out.width(), 6);
  for (double v : out.values()) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Bicubic, TapsSumToOne) {
  for (auto [in, out, s] : {std::tuple{64, 16, ScaleFactor{1, 4}}, {9, 27, ScaleFactor{3, 1}}, {10, 5, ScaleFactor{1, 2}}}) {
    for (const auto& taps : bicubic_taps(in, out, s)) {
      double sum = 0.0;
      for (const auto& t : taps) sum += t.weight;
      EXPECT_NEAR(sum, 1.0, 1e-14);
    }
  }
}

TEST(Bicubic, RampMatchesDenseOracle) {
  Image ramp(8, 8, 1);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) ramp.at(0, y, x) = (y * 8 + x) / 63.0;
  const Image out = bicubic_resize(ramp, {1, 2});
  const auto m = dense_bicubic(8, 4, 0.5);
  ASSERT_EQ(out.height(), 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) acc += m[i][y] * m[j][x] * ramp.at(0, y, x);
      EXPECT_NEAR(out.at(0, i, j), acc, 1e-10);
    }
}

TEST(Bicubic, RandomDownscaleMatchesDenseOracle) {
  std::mt19937_64 rng(3);
  const Image img = random_image(rng, 12, 16, 2);
  const Image out = bicubic_resize(img, {1, 4});
  const auto mh = dense_bicubic(12, 3, 0.25), mw = dense_bicubic(16, 4, 0.25);
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) {
        double acc = 0.0;
        for (int y = 0; y < 12; ++y)
          for (int x = 0; x < 16; ++x) acc += mh[i][y] * mw[j][x] * img.at(c, y, x);
        EXPECT_NEAR(out.at(c, i, j), acc, 1e-10);
      }
}

TEST(Bicubic, Linearity) {
  std::mt19937_64 rng(5);
  const Image a = random_image(rng, 16, 16, 3), b = random_image(rng, 16, 16, 3);
  Image mix(16, 16, 3);
  for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = 0.3 * a.values()[i] - 1.7 * b.values()[i];
  for (ScaleFactor s : {ScaleFactor{1, 4}, ScaleFactor{2, 1}}) {
    const Image ra = bicubic_resize(a, s), rb = bicubic_resize(b, s), rm = bicubic_resize(mix, s);
    for (std::size_t i = 0; i < rm.size(); ++i)
      EXPECT_NEAR(rm.values()[i], 0.3 * ra.values()[i] - 1.7 * rb.values()[i], 1e-10);
  }
}

TEST(Bicubic, Errors) {
  EXPECT_THROW(bicubic_resize(Image(3, 3, 1, 0.5), {1, 4}), InvalidArgument);
  Image bad(8, 8, 1, 0.5);
  bad.at(0, 2, 2) = std::nan("");
  EXPECT_THROW(bicubic_resize(bad, {1, 2}), InvalidArgument);
  EXPECT_THROW(bicubic_resize(Image(), {1, 2}), InvalidArgument);
}

TEST(Bilinear, ConstantExtension) {
  const Image out = bilinear_resize(Image(1, 1, 1, 0.7), 48, 48);
  ASSERT_EQ(out.height(), 48);
  for (double v : out.values()) EXPECT_EQ(v, 0.7);
}

TEST(Bilinear, IdentityIsBitwise) {
  std::mt19937_64 rng(9);
  const Image img = random_image(rng, 13, 7, 3);
  EXPECT_EQ(bilinear_resize(img, 13, 7), img);
}

TEST(Bilinear, CheckerMatchesPerPixelFormula) {
  const Image src = from_rows({{0, 1}, {1, 0}});
  const Image out = bilinear_resize(src, 4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double y = i / 3.0, x = j / 3.0;
      const double expected = (1 - y) * (1 - x) * 0 + (1 - y) * x * 1 + y * (1 - x) * 1 + y * x * 0;
      EXPECT_NEAR(out.at(0, i, j), expected, 1e-12);
    }
}

TEST(Bilinear, RandomMatchesPerPixelFormula) {
  std::mt19937_64 rng(11);
  const Image src = random_image(rng, 5, 6, 1);
  const Image out = bilinear_resize(src, 9, 4);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 4; ++j) {
      const double sy = i * 4.0 / 8.0, sx = j * 5.0 / 3.0;
      const int y0 = std::min(static_cast<int>(sy), 3), x0 = std::min(static_cast<int>(sx), 4);
      const double fy = sy - y0, fx = sx - x0;
      const double e = (1 - fy) * (1 - fx) * src.at(0, y0, x0) + (1 - fy) * fx * src.at(0, y0, x0 + 1) +
                       fy * (1 - fx) * src.at(0, y0 + 1, x0) + fy * fx * src.at(0, y0 + 1, x0 + 1);
      EXPECT_NEAR(out.at(0, i, j), e, 1e-12);
    }
}

TEST(Bilinear, Errors) {
  EXPECT_THROW(bilinear_resize(Image(2, 2, 1, 0.0), 0, 4), InvalidArgument);
  EXPECT_THROW(bilinear_resize(Image(2, 2, 1, 0.0), 4, -1), InvalidArgument);
}

TEST(Haar, ConstantBlock) {
  const HaarBands b = haar_decompose(from_rows({{1, 1}, {1, 1}}));
  EXPECT_EQ(b.ll.at(0, 0, 0), 2.0);
  EXPECT_EQ(b.lh.at(0, 0, 0), 0.0);
  EXPECT_EQ(b.hl.at(0, 0, 0), 0.0);
  EXPECT_EQ(b.hh.at(0, 0, 0), 0.0);
}

TEST(Haar, MatrixOracle) {
  // Orthonormal 4x4 Haar matrix applied to the flattened block (a, b, c, d).
  const double H[4][4] = {{0.5, 0.5, 0.5, 0.5}, {0.5, -0.5, 0.5, -0.5}, {0.5, 0.5, -0.5, -0.5}, {0.5, -0.5, -0.5, 0.5}};
  const double blk[4] = {1, 2, 3, 4};
  double expect[4] = {0, 0, 0, 0};
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) expect[r] += H[r][k] * blk[k];
  const HaarBands b = haar_decompose(from_rows({{1, 2}, {3, 4}}));
  EXPECT_DOUBLE_EQ(b.ll.at(0, 0, 0), expect[0]);
  EXPECT_DOUBLE_EQ(b.lh.at(0, 0, 0), expect[1]);
  EXPECT_DOUBLE_EQ(b.hl.at(0, 0, 0), expect[2]);
  EXPECT_DOUBLE_EQ(b.hh.at(0, 0, 0), expect[3]);
  EXPECT_DOUBLE_EQ(expect[0], 5.0);
  EXPECT_DOUBLE_EQ(expect[1], -1.0);
  EXPECT_DOUBLE_EQ(expect[2], -2.0);
  EXPECT_DOUBLE_EQ(expect[3], 0.0);
  double energy = 0.0;
  for (double v : expect) energy += v * v;
  EXPECT_DOUBLE_EQ(energy, 30.0);
}

TEST(Haar, InverseExamples) {
  HaarBands b{Image(1, 1, 1, 2.0), Image(1, 1, 1, 0.0), Image(1, 1, 1, 0.0), Image(1, 1, 1, 0.0)};
  EXPECT_EQ(haar_reconstruct(b), from_rows({{1, 1}, {1, 1}}));
  b = {Image(1, 1, 1, 5.0), Image(1, 1, 1, -1.0), Image(1, 1, 1, -2.0), Image(1, 1, 1, 0.0)};
  EXPECT_EQ(haar_reconstruct(b), from_rows({{1, 2}, {3, 4}}));
}

TEST(Haar, RoundTripAndEnergy) {
  std::mt19937_64 rng(21);
  const Image img = random_image(rng, 64, 64, 3);
  const HaarBands b = haar_decompose(img);
  EXPECT_LE(max_abs_diff(haar_reconstruct(b), img), 1e-6);
  double in = 0.0, out = 0.0;
  for (double v : img.values()) in += v * v;
  for (const Image* band : {&b.ll, &b.lh, &b.hl, &b.hh})
    for (double v : band->values()) out += v * v;
  EXPECT_NEAR(out / in, 1.0, 1e-12);
}

TEST(Haar, Errors) {
  EXPECT_THROW(haar_decompose(Image(5, 4, 1, 0.0)), InvalidArgument);
  EXPECT_THROW(haar_decompose(Image(4, 3, 1, 0.0)), InvalidArgument);
  HaarBands b{Image(2, 2, 1), Image(2, 2, 1), Image(2, 3, 1), Image(2, 2, 1)};
  EXPECT_THROW(haar_reconstruct(b), InvalidArgument);
}

TEST(WaveletHighfreq, ConstantIsExactlyZero) {
  const SubbandStack s = wavelet_highfreq(Image(16, 12, 3, 0.37));
  for (double v : s.bands.values()) EXPECT_EQ(v, 0.0);
}

TEST(WaveletHighfreq, ShapeAndOrdering) {
  std::mt19937_64 rng(4);
  const Image img = random_image(rng, 64, 64, 3);
  const SubbandStack s = wavelet_highfreq(img);
  EXPECT_EQ(s.height(), 32);
  EXPECT_EQ(s.width(), 32);
  EXPECT_EQ(s.channels(), 9);
  const HaarBands b = haar_decompose(img);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(s.bands.at(c, 5, 7), b.lh.at(c, 5, 7));
    EXPECT_EQ(s.bands.at(3 + c, 5, 7), b.hl.at(c, 5, 7));
    EXPECT_EQ(s.bands.at(6 + c, 5, 7), b.hh.at(c, 5, 7));
  }
  const SubbandStack g = wavelet_highfreq(from_rows({{1, 2}, {3, 4}}));
  EXPECT_DOUBLE_EQ(g.bands.at(0, 0, 0), -1.0);
  EXPECT_DOUBLE_EQ(g.bands.at(1, 0, 0), -2.0);
  EXPECT_DOUBLE_EQ(g.bands.at(2, 0, 0), 0.0);
}

TEST(Gaussian, KernelMatchesFormula) {
  for (double sigma : {0.5, 1.0, 1.5, 2.3}) {
    const auto k = gaussian_kernel(sigma);
    const int r = static_cast<int>(std::ceil(3 * sigma));
    ASSERT_EQ(static_cast<int>(k.size()), 2 * r + 1);
    double total = 0.0;
    for (int i = -r; i <= r; ++i) total += std::exp(-i * i / (2 * sigma * sigma));
    for (int i = -r; i <= r; ++i) EXPECT_NEAR(k[i + r], std::exp(-i * i / (2 * sigma * sigma)) / total, 1e-15);
  }
}

TEST(Gaussian, HighfreqOfConstantIsZero) {
  for (double v : gaussian_highfreq(Image(20, 17, 3, 0.6), 1.3).values()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Gaussian, ImpulseCentre) {
  const double sigma = 1.0;
  Image img(21, 21, 1, 0.0);
  img.at(0, 10, 10) = 1.0;
  double total = 0.0;
  for (int i = -3; i <= 3; ++i) total += std::exp(-i * i / 2.0);
  const double g00 = (1.0 / total) * (1.0 / total);
  EXPECT_NEAR(gaussian_highfreq(img, sigma).at(0, 10, 10), 1.0 - g00, 1e-14);
}

TEST(Gaussian, RampInteriorResidualVanishes) {
  Image ramp(24, 24, 1);
  for (int y = 0; y < 24; ++y)
    for (int x = 0; x < 24; ++x) ramp.at(0, y, x) = 0.01 * x + 0.02 * y;
  const Image r = gaussian_highfreq(ramp, 1.5);
  for (int y = 5; y < 19; ++y)
    for (int x = 5; x < 19; ++x) EXPECT_NEAR(r.at(0, y, x), 0.0, 1e-6);
}

TEST(Gaussian, ReflectIndexAndErrors) {
  EXPECT_EQ(reflect_index(-1, 5), 1);
  EXPECT_EQ(reflect_index(-2, 5), 2);
  EXPECT_EQ(reflect_index(5, 5), 3);
  EXPECT_EQ(reflect_index(2, 5), 2);
  EXPECT_THROW(gaussian_kernel(0.0), InvalidArgument);
  EXPECT_THROW(gaussian_highfreq(Image(4, 4, 1, 0.0), -1.0), InvalidArgument);
}

TEST(Png, QuantizedRoundTrip) {
  dasr::testing::TempDir dir;
  std::mt19937_64 rng(8);
  for (int ch : {1, 3}) {
    const Image q = quantize_8bit(random_image(rng, 9, 11, ch));
    const auto p = dir / ("img" + std::to_string(ch) + ".png");
    save_image(q, p);
    EXPECT_EQ(load_image(p), q);
  }
}

TEST(Png, ByteMappingAndClamping) {
  dasr::testing::TempDir dir;
  Image img(1, 3, 1);
  img.at(0, 0, 0) = 128.0 / 255.0;
  img.at(0, 0, 1) = 1.2;
  img.at(0, 0, 2) = -0.3;
  save_image(img, dir / "m.png");
  const Image back = load_image(dir / "m.png");
  EXPECT_NEAR(back.at(0, 0, 0), 0.50196, 1e-5);
  EXPECT_EQ(back.at(0, 0, 1), 1.0);
  EXPECT_EQ(back.at(0, 0, 2), 0.0);
  EXPECT_EQ(quantize_to_byte(1.2), 255);
  EXPECT_EQ(quantize_to_byte(0.5), 128);  // 127.5 rounds half up
}

TEST(Png, Errors) {
  dasr::testing::TempDir dir;
  EXPECT_THROW(load_image(dir / "missing.png"), IoError);
  std::ofstream(dir / "junk.png") << "definitely not a png";
  EXPECT_THROW(load_image(dir / "junk.png"), FormatError);
  EXPECT_THROW(save_image(Image(2, 2, 1, 0.5), dir / "no_such_dir" / "x.png"), IoError);
}
