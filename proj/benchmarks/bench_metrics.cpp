#include <benchmark/benchmark.h>

#include <random>

#include "dasr/evaluation/metrics.hpp"

using namespace dasr;

namespace {

std::pair<Image, Image> noisy_pair(int side) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 0.05);
  Image a(side, side, 3), b(side, side, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.values()[i] = u(rng);
    b.values()[i] = std::clamp(a.values()[i] + n(rng), 0.0, 1.0);
  }
  return {a, b};
}

void BM_Psnr(benchmark::State& state) {
  const auto [a, b] = noisy_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluation::psnr(a, b));
}
BENCHMARK(BM_Psnr)->Arg(128)->Arg(512);

void BM_Ssim(benchmark::State& state) {
  const auto [a, b] = noisy_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluation::ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(128)->Arg(512);

}  // namespace
