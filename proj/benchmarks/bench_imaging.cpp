#include <benchmark/benchmark.h>

#include <random>

#include "dasr/imaging/filter.hpp"
#include "dasr/imaging/resample.hpp"
#include "dasr/imaging/wavelet.hpp"

using namespace dasr;

namespace {

Image noise_image(int side, int channels) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(side, side, channels);
  for (double& v : img.values()) v = u(rng);
  return img;
}

void BM_HaarDecompose(benchmark::State& state) {
  const Image img = noise_image(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(haar_decompose(img));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(img.size()));
}
BENCHMARK(BM_HaarDecompose)->Arg(64)->Arg(256);

void BM_HaarRoundtrip(benchmark::State& state) {
  const Image img = noise_image(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(haar_reconstruct(haar_decompose(img)));
}
BENCHMARK(BM_HaarRoundtrip)->Arg(128);

void BM_BicubicDown4(benchmark::State& state) {
  const Image img = noise_image(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(bicubic_resize(img, {1, 4}));
}
BENCHMARK(BM_BicubicDown4)->Arg(128)->Arg(512);

void BM_BicubicUp4(benchmark::State& state) {
  const Image img = noise_image(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(bicubic_resize(img, {4, 1}));
}
BENCHMARK(BM_BicubicUp4)->Arg(32)->Arg(128);

void BM_GaussianBlur(benchmark::State& state) {
  const Image img = noise_image(128, 3);
  const double sigma = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(img, sigma));
}
BENCHMARK(BM_GaussianBlur)->Arg(10)->Arg(30);

}  // namespace
