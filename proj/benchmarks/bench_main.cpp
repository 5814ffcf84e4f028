#include <benchmark/benchmark.h>

#include <cmath>

#include "shearmix/brownian.hpp"
#include "shearmix/norms.hpp"
#include "shearmix/oscillatory.hpp"
#include "shearmix/phase.hpp"
#include "shearmix/rng.hpp"
#include "shearmix/spectral_solver.hpp"

using namespace shearmix;

namespace {

ModeField cos_x(std::size_t ny) {
  ModeField m(ny, 1);
  for (int k : {-1, 1})
    for (auto& v : m.activate(k)) v = 0.5;
  return m;
}

void BM_StrangStep(benchmark::State& state) {
  const auto ny = static_cast<std::size_t>(state.range(0));
  const auto b = ShearProfile::cos_power(1);
  ModeEvolver ev(b, 1e-4, cos_x(ny), 0.05);
  double t = 0.0;
  for (auto _ : state) {
    t += 0.05;
    ev.advance_to(t);
  }
  benchmark::DoNotOptimize(ev.l2_norm());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_StrangStep)->Arg(512)->Arg(1024)->Arg(4096);

void BM_SamplePath(benchmark::State& state) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_path(seed++, 1000.0, steps, 1e-4));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_SamplePath)->Arg(8192)->Arg(100000);

void BM_PhaseMoments(benchmark::State& state) {
  const auto b = ShearProfile::cos_power(static_cast<int>(state.range(0)));
  const auto path = sample_path(7, 1000.0, 100000, 1e-4);
  const auto times = dyadic_times(1.0, 1000.0);
  for (auto _ : state) benchmark::DoNotOptimize(phase_moments(path, 1e-4, b.bandwidth(), times));
}
BENCHMARK(BM_PhaseMoments)->Arg(1)->Arg(3);

void BM_EnclosingRadius(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<Complex> pts(n);
  UniformStream u(3);
  for (auto& p : pts) p = Complex(u(), u());
  for (auto _ : state) benchmark::DoNotOptimize(enclosing_radius(pts));
}
BENCHMARK(BM_EnclosingRadius)->Arg(1024)->Arg(8192);

void BM_StochasticIntegral(benchmark::State& state) {
  const auto b = ShearProfile::cos_power(1);
  const double t = static_cast<double>(state.range(0));
  const auto path = sample_path(11, t, phase_path_steps(t), 1e-4);
  const auto field = compute_phase_field(b, path, 1e-4, t);
  const auto one = PeriodicFunction::one();
  for (auto _ : state) benchmark::DoNotOptimize(stochastic_integral(field, 4, one, one));
}
BENCHMARK(BM_StochasticIntegral)->Arg(64)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
