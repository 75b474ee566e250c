#include <benchmark/benchmark.h>

#include <random>

#include "proxmag/sar.hpp"

using namespace proxmag;

namespace {

struct Setup {
  SarGeometry geometry;
  SceneGrid grid;
  std::vector<cplx> image;
  std::vector<cplx> data;
};

Setup make_setup(std::size_t n) {
  CollectionOptions o;
  o.pulses = 2 * n;
  o.frequencies = 2 * n;
  Setup s{linear_collection(o), SceneGrid::centered(n, n, 0.3), {}, {}};
  std::mt19937_64 gen(7);
  std::normal_distribution<double> d;
  s.image.resize(n * n);
  for (auto& z : s.image) z = {d(gen), d(gen)};
  s.data.resize(o.pulses * o.frequencies);
  for (auto& z : s.data) z = {d(gen), d(gen)};
  return s;
}

void BM_FreqApply(benchmark::State& state) {
  const auto s = make_setup(static_cast<std::size_t>(state.range(0)));
  const FrequencyDomainSarOperator a(s.geometry, s.grid);
  for (auto _ : state) benchmark::DoNotOptimize(a.apply(s.image));
}
BENCHMARK(BM_FreqApply)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FreqAdjoint(benchmark::State& state) {
  const auto s = make_setup(static_cast<std::size_t>(state.range(0)));
  const FrequencyDomainSarOperator a(s.geometry, s.grid);
  for (auto _ : state) benchmark::DoNotOptimize(a.adjoint(s.data));
}
BENCHMARK(BM_FreqAdjoint)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TimeApply(benchmark::State& state) {
  const auto s = make_setup(64);
  const TimeDomainSarOperator a(s.geometry, s.grid, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(a.apply(s.image));
}
BENCHMARK(BM_TimeApply)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TimeAdjoint(benchmark::State& state) {
  const auto s = make_setup(64);
  const TimeDomainSarOperator a(s.geometry, s.grid, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(a.adjoint(s.data));
}
BENCHMARK(BM_TimeAdjoint)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
