#include <benchmark/benchmark.h>

#include <cmath>

#include "mosharp/convergence.hpp"
#include "mosharp/modular.hpp"
#include "mosharp/sharp.hpp"
#include "mosharp/stencil.hpp"
#include "mosharp/test_functions.hpp"

using namespace mosharp;

namespace {

SampledField bump_field(int n, double h) {
  return build_field(Grid::with_spacing(n, 3.0, h), TestFunction(TestFunction::Id::Bump, {}, n));
}

MusielakOrliczFunction square(int n) {
  auto phi = MusielakOrliczFunction::power(2.0, n);
  phi.set_domain_half_width(3.0);
  return phi;
}

}  // namespace

static void BM_SharpAverageField1D(benchmark::State& state) {
  const double h = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const SampledField f = bump_field(1, h);
  for (auto _ : state) benchmark::DoNotOptimize(sharp_average_field(f, 32 * h));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.grid().size()));
}
BENCHMARK(BM_SharpAverageField1D)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

static void BM_SharpAverageField2D(benchmark::State& state) {
  const double h = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const SampledField f = bump_field(2, h);
  for (auto _ : state) benchmark::DoNotOptimize(sharp_average_field(f, 4 * h));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.grid().size()));
}
BENCHMARK(BM_SharpAverageField2D)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_SharpCache1D(benchmark::State& state) {
  const double h = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const SampledField f = bump_field(1, h);
  const RQuadrature rq = RQuadrature::dyadic(PsiFamily::power(0.125), f.grid());
  for (auto _ : state) benchmark::DoNotOptimize(SharpCache(f, rq));
}
BENCHMARK(BM_SharpCache1D)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_SharpNorm1D(benchmark::State& state) {
  const double h = std::ldexp(1.0, -10);
  const SampledField f = bump_field(1, h);
  const SharpCache cache(f, RQuadrature::dyadic(PsiFamily::power(0.125), f.grid()));
  const auto phi = square(1);
  SharpOptions so;
  so.closure = Closure::Richardson;
  for (auto _ : state) benchmark::DoNotOptimize(sharp_norm(phi, cache, so));
}
BENCHMARK(BM_SharpNorm1D)->Unit(benchmark::kMillisecond);

static void BM_LuxemburgNorm(benchmark::State& state) {
  const SampledField f = bump_field(1, std::ldexp(1.0, -12));
  const auto phi = MusielakOrliczFunction::double_phase(2.0, 3.0, Weight::power_of_norm(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(phi, f));
}
BENCHMARK(BM_LuxemburgNorm)->Unit(benchmark::kMillisecond);

static void BM_TheoremSweep1D(benchmark::State& state) {
  const auto phi = square(1);
  const TestFunction f(TestFunction::Id::Bump, {}, 1);
  SweepSettings s;
  s.rows = static_cast<int>(state.range(0));
  s.preflight = false;
  for (auto _ : state) benchmark::DoNotOptimize(theorem_sweep(phi, f, s));
}
BENCHMARK(BM_TheoremSweep1D)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
