#include <algorithm>
#include <cmath>
#include <numbers>

#include "dasr/data/degradation.hpp"
#include "dasr/error.hpp"

namespace dasr::data {

namespace {

double smoothstep(double e0, double e1, double x) {
  const double t = std::clamp((x - e0) / (e1 - e0), 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}

}  // namespace

Image synthesize_hr_image(std::mt19937_64& rng, int height, int width, int channels) {
  DASR_REQUIRE(height >= 1 && width >= 1, "synthesize_hr_image: degenerate size");
  DASR_REQUIRE(channels == 1 || channels == 3, "synthesize_hr_image: need 1 or 3 channels");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double pi = std::numbers::pi;
  Image img(height, width, channels);

  // Background: two-colour linear gradient.
  double c0[3], c1[3];
  for (int c = 0; c < 3; ++c) {
    c0[c] = 0.2 + 0.6 * u(rng);
    c1[c] = 0.2 + 0.6 * u(rng);
  }
  const double angle = 2.0 * pi * u(rng);
  const double gx = std::cos(angle), gy = std::sin(angle);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double t = 0.5 + 0.5 * ((x / double(width) - 0.5) * gx + (y / double(height) - 0.5) * gy);
      for (int c = 0; c < channels; ++c) img.at(c, y, x) = c0[c] + (c1[c] - c0[c]) * t;
    }

  // Soft-edged ellipses and rectangles, some carrying an oriented texture.
  const int shapes = 6 + static_cast<int>(u(rng) * 8);
  for (int s = 0; s < shapes; ++s) {
    const double cx = u(rng) * width, cy = u(rng) * height;
    const double rx = (0.05 + 0.25 * u(rng)) * width, ry = (0.05 + 0.25 * u(rng)) * height;
    const double rot = pi * u(rng);
    const double cr = std::cos(rot), sr = std::sin(rot);
    const bool rect = u(rng) < 0.4;
    const double edge = 0.02 + 0.15 * u(rng);
    const bool textured = u(rng) < 0.5;
    const double freq = 2.0 * pi / (2.0 + 10.0 * u(rng));
    const double tex_ang = pi * u(rng);
    const double tex_amp = 0.05 + 0.2 * u(rng);
    double col[3];
    for (double& v : col) v = u(rng);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double dx = x - cx, dy = y - cy;
        const double px = (cr * dx + sr * dy) / rx;
        const double py = (-sr * dx + cr * dy) / ry;
        const double d = rect ? std::max(std::abs(px), std::abs(py)) : std::sqrt(px * px + py * py);
        const double a = 1.0 - smoothstep(1.0 - edge, 1.0 + edge, d);
        if (a <= 0.0) continue;
        double tex = 0.0;
        if (textured)
          tex = tex_amp * std::sin(freq * (x * std::cos(tex_ang) + y * std::sin(tex_ang)));
        for (int c = 0; c < channels; ++c) {
          double& v = img.at(c, y, x);
          v = (1.0 - a) * v + a * (col[c] + tex);
        }
      }
  }

  // Fine grain so the HR image carries genuine high-frequency content.
  std::normal_distribution<double> grain(0.0, 0.01);
  for (double& v : img.values()) v = std::clamp(v + grain(rng), 0.0, 1.0);
  return img;
}

}  // namespace dasr::data
