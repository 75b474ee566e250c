#include <benchmark/benchmark.h>

#include <random>

#include "proxmag/gradient.hpp"
#include "proxmag/prox.hpp"
#include "proxmag/regularizers.hpp"

using namespace proxmag;

namespace {

ComplexImage random_image(std::size_t h, std::size_t w, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n;
  std::vector<cplx> v(h * w);
  for (auto& z : v) z = {n(gen), n(gen)};
  return ComplexImage({1, h, w}, std::move(v));
}

std::vector<double> random_magnitudes(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

void BM_LiftL1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto z = random_image(n, n, 1);
  const WeightedLpNorm h({1, n, n}, 1, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(magnitude_lift(h, z, 1.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_LiftL1)->Arg(64)->Arg(256);

void BM_LiftTv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto z = random_image(n, n, 2);
  const TotalVariation h({1, n, n}, TvVariant::iso2d, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(magnitude_lift(h, z, 1.0));
}
BENCHMARK(BM_LiftTv)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LiftTgv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto z = random_image(n, n, 3);
  const Tgv2 h({1, n, n}, 0.1, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(magnitude_lift(h, z, 1.0));
}
BENCHMARK(BM_LiftTgv)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TvProx(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto r = random_magnitudes(n * n, 4);
  const TotalVariation h({1, n, n}, static_cast<TvVariant>(state.range(1)), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(h.prox(r, 1.0));
}
BENCHMARK(BM_TvProx)
    ->Args({64, static_cast<int>(TvVariant::iso2d)})
    ->Args({64, static_cast<int>(TvVariant::aniso2d)})
    ->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_magnitudes(n * n, 5);
  std::vector<double> g(2 * n * n), back(n * n);
  const GradientOperator d({1, n, n}, {{Axis::row}, {Axis::col}});
  for (auto _ : state) {
    d.apply(x, g);
    d.adjoint(g, back);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_Gradient)->Arg(256)->Arg(1024);

}  // namespace
