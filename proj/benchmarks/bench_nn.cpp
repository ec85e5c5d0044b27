#include <benchmark/benchmark.h>

#include <random>

#include "dasr/models/networks.hpp"
#include "dasr/nn/ops.hpp"

using namespace dasr;

namespace {

nn::Tensor random_tensor(nn::Shape s) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  nn::Tensor t(s);
  for (double& v : t.values()) v = u(rng);
  return t;
}

void BM_Conv3x3Forward(benchmark::State& state) {
  const int ch = static_cast<int>(state.range(0));
  const nn::Var x = nn::constant(random_tensor({4, ch, 32, 32}));
  const nn::Var w = nn::constant(random_tensor({ch, ch, 3, 3}));
  const nn::Var b = nn::constant(random_tensor({1, ch, 1, 1}));
  for (auto _ : state) benchmark::DoNotOptimize(nn::conv2d(x, w, b, 1, 1));
}
BENCHMARK(BM_Conv3x3Forward)->Arg(8)->Arg(32);

void BM_Conv3x3Backward(benchmark::State& state) {
  const int ch = static_cast<int>(state.range(0));
  const nn::Var x = nn::leaf(random_tensor({4, ch, 32, 32}));
  const nn::Var w = nn::leaf(random_tensor({ch, ch, 3, 3}));
  const nn::Var b = nn::leaf(random_tensor({1, ch, 1, 1}));
  for (auto _ : state) {
    nn::backward(nn::mean(nn::conv2d(x, w, b, 1, 1)));
    x->zero_grad();
    w->zero_grad();
    b->zero_grad();
  }
}
BENCHMARK(BM_Conv3x3Backward)->Arg(8)->Arg(32);

void BM_DiscriminatorInfer(benchmark::State& state) {
  models::DiscConfig cfg;
  cfg.in_channels = 9;
  cfg.channels = {16, 32, 32, 1};
  models::Discriminator d(cfg, 1);
  const nn::Tensor x = random_tensor({4, 9, 16, 16});
  for (auto _ : state) benchmark::DoNotOptimize(d.infer(x));
}
BENCHMARK(BM_DiscriminatorInfer);

void BM_DsnForwardBackward(benchmark::State& state) {
  models::Dsn dsn({2, 8, 4}, 3, 1);
  const nn::Tensor x = random_tensor({4, 3, 128, 128});
  for (auto _ : state) {
    dsn.zero_grad();
    nn::backward(nn::mean(dsn.forward(nn::constant(x))));
  }
}
BENCHMARK(BM_DsnForwardBackward);

}  // namespace
