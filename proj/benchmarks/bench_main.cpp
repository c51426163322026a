#include <complex>
#include <string>

#include <benchmark/benchmark.h>

#include "tsruin/diagnostics.hpp"
#include "tsruin/laplace.hpp"
#include "tsruin/model.hpp"
#include "tsruin/ruin.hpp"
#include "tsruin/sim.hpp"

namespace {

const tsruin::ClaimsModel kModel = tsruin::ClaimsModel::with_loading(0.01, 1.0, 0.99, 0.2);

void BM_StableIncrement(benchmark::State& state) {
  const tsruin::sim::StableSampler draw(tsruin::sim::stable_increment_params(kModel, 0.01));
  tsruin::sim::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw(rng));
}
BENCHMARK(BM_StableIncrement);

void BM_TemperedIncrement(benchmark::State& state) {
  tsruin::sim::TemperedSampler draw(kModel, 0.01);
  tsruin::sim::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw(rng));
}
BENCHMARK(BM_TemperedIncrement);

void BM_PhiComplex(benchmark::State& state) {
  const std::complex<double> delta(0.5, 40.0);
  for (auto _ : state) benchmark::DoNotOptimize(tsruin::phi(kModel, delta));
}
BENCHMARK(BM_PhiComplex);

void BM_BTalbot(benchmark::State& state) {
  const tsruin::BTransform b(kModel);
  const auto digits = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(tsruin::laplace::talbot_invert(b, 10.0, digits));
}
BENCHMARK(BM_BTalbot)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BLevin(benchmark::State& state) {
  const tsruin::BTransform b(kModel);
  const auto nodes = static_cast<int>(state.range(0));
  tsruin::diag::set_sink([](const std::string&) {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(tsruin::laplace::levin_invert(b, 10.0, nodes, nodes));
  }
  tsruin::diag::reset_sink();
}
BENCHMARK(BM_BLevin)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
