#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "dasr/data/degradation.hpp"
#include "dasr/error.hpp"

namespace dasr::data {

namespace {

// ITU-T T.81 Annex K tables.
constexpr std::array<int, 64> kLuma{
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
constexpr std::array<int, 64> kChroma{
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99, 24, 26, 56, 99, 99, 99,
    99, 99, 47, 66, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

struct Dct8 {
  double basis[8][8];
  Dct8() {
    for (int u = 0; u < 8; ++u) {
      const double cu = u == 0 ? std::sqrt(0.125) : 0.5;
      for (int x = 0; x < 8; ++x) basis[u][x] = cu * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
    }
  }
};

const Dct8& dct() {
  static const Dct8 d;
  return d;
}

// Quantise one 8x8 block of level-shifted samples in place.
void code_block(double (&blk)[8][8], const std::array<int, 64>& table, int quality) {
  const auto& b = dct().basis;
  double tmp[8][8];
  double coef[8][8];
  for (int u = 0; u < 8; ++u)
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int y = 0; y < 8; ++y) acc += b[u][y] * blk[y][x];
      tmp[u][x] = acc;
    }
  for (int u = 0; u < 8; ++u)
    for (int v = 0; v < 8; ++v) {
      double acc = 0.0;
      for (int x = 0; x < 8; ++x) acc += tmp[u][x] * b[v][x];
      const double q = jpeg_scaled_quant(table[u * 8 + v], quality);
      coef[u][v] = std::round(acc / q) * q;
    }
  for (int y = 0; y < 8; ++y)
    for (int v = 0; v < 8; ++v) {
      double acc = 0.0;
      for (int u = 0; u < 8; ++u) acc += b[u][y] * coef[u][v];
      tmp[y][v] = acc;
    }
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int v = 0; v < 8; ++v) acc += tmp[y][v] * b[v][x];
      blk[y][x] = acc;
    }
}

void code_plane(std::vector<double>& plane, int h, int w, const std::array<int, 64>& table,
                int quality) {
  for (int by = 0; by < h; by += 8)
    for (int bx = 0; bx < w; bx += 8) {
      double blk[8][8];
      // Edge replication for partial blocks.
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
          blk[y][x] = plane[std::min(by + y, h - 1) * w + std::min(bx + x, w - 1)] - 128.0;
      code_block(blk, table, quality);
      for (int y = 0; y < 8 && by + y < h; ++y)
        for (int x = 0; x < 8 && bx + x < w; ++x) plane[(by + y) * w + bx + x] = blk[y][x] + 128.0;
    }
}

double to_sample(double v) { return std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5); }
double clamp_byte(double v) { return std::clamp(std::round(v), 0.0, 255.0); }

}  // namespace

int jpeg_scaled_quant(int base, int quality) {
  DASR_REQUIRE(quality >= 1 && quality <= 100, "jpeg quality must be in [1, 100]");
  const int s = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  return std::clamp((base * s + 50) / 100, 1, 255);
}

Image jpeg_roundtrip(const Image& img, int quality) {
  DASR_REQUIRE(img.channels() == 1 || img.channels() == 3, "jpeg: need 1 or 3 channels");
  jpeg_scaled_quant(1, quality);
  const int h = img.height();
  const int w = img.width();
  const std::size_t n = img.pixels();
  Image out(h, w, img.channels());
  if (img.channels() == 1) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = to_sample(img.values()[i]);
    code_plane(y, h, w, kLuma, quality);
    for (std::size_t i = 0; i < n; ++i) out.values()[i] = clamp_byte(y[i]) / 255.0;
    return out;
  }
  std::vector<double> yy(n), cb(n), cr(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = to_sample(img.plane(0)[i]);
    const double g = to_sample(img.plane(1)[i]);
    const double b = to_sample(img.plane(2)[i]);
    yy[i] = 0.299 * r + 0.587 * g + 0.114 * b;
    cb[i] = -0.168736 * r - 0.331264 * g + 0.5 * b + 128.0;
    cr[i] = 0.5 * r - 0.418688 * g - 0.081312 * b + 128.0;
  }
  code_plane(yy, h, w, kLuma, quality);
  code_plane(cb, h, w, kChroma, quality);
  code_plane(cr, h, w, kChroma, quality);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = yy[i];
    const double u = cb[i] - 128.0;
    const double v = cr[i] - 128.0;
    out.plane(0)[i] = clamp_byte(y + 1.402 * v) / 255.0;
    out.plane(1)[i] = clamp_byte(y - 0.344136 * u - 0.714136 * v) / 255.0;
    out.plane(2)[i] = clamp_byte(y + 1.772 * u) / 255.0;
  }
  return out;
}

}  // namespace dasr::data
