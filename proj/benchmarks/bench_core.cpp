#include <benchmark/benchmark.h>

#include "deepspline/lipschitz.hpp"
#include "deepspline/network.hpp"
#include "deepspline/optim.hpp"

namespace ds = deepspline;

namespace {

ds::Network reference_net() {
  ds::Rng rng(42, 0);
  return ds::make_spline_network({2, 8, 8, 1}, 21, -1.0, 1.0, rng);
}

void SplineEval(benchmark::State& state) {
  const ds::DeepSpline s = ds::init_abs(ds::uniform_knots(-1.0, 1.0, static_cast<int>(state.range(0))));
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ds::eval(s, x));
    x += 1e-4;
  }
}
BENCHMARK(SplineEval)->Arg(21)->Arg(101)->Arg(501);

void Forward(benchmark::State& state) {
  const ds::Network net = reference_net();
  const ds::Vec x{0.3, -0.7};
  for (auto _ : state) benchmark::DoNotOptimize(ds::forward(net, x));
}
BENCHMARK(Forward);

void ForwardBackward(benchmark::State& state) {
  const ds::Network net = reference_net();
  const ds::Vec x{0.3, -0.7};
  for (auto _ : state) {
    ds::ForwardCache cache;
    const ds::Vec y = ds::forward(net, x, cache);
    benchmark::DoNotOptimize(ds::backward(net, cache, ds::Vec{ds::bce_grad(1, y[0])}));
  }
}
BENCHMARK(ForwardBackward);

void EuclideanBound(benchmark::State& state) {
  const ds::Network net = reference_net();
  for (auto _ : state) benchmark::DoNotOptimize(ds::bound_euclidean(net, ds::OuterNorm::l1));
}
BENCHMARK(EuclideanBound);

void TrainEpoch(benchmark::State& state) {
  ds::Rng data_rng(7, 0);
  const ds::Dataset train = ds::gen_circle(1000, data_rng);
  ds::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.lambda = 1e-5;
  for (auto _ : state) {
    ds::Rng rng(42, 1);
    ds::Network net = ds::make_spline_network({2, 2, 1}, 21, -1.0, 1.0, rng);
    benchmark::DoNotOptimize(ds::train(std::move(net), train, cfg, rng));
  }
}
BENCHMARK(TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
