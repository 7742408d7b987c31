#include <benchmark/benchmark.h>

#include <random>

#include "nlseg/admm.hpp"
#include "nlseg/imgio.hpp"
#include "nlseg/issapl.hpp"
#include "nlseg/operators.hpp"
#include "nlseg/synth.hpp"
#include "nlseg/threshold.hpp"

using namespace nlseg;

namespace {

ImageGrid noise_grid(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  ImageGrid g(n);
  for (auto& x : g.data()) x = d(rng);
  return g;
}

ImageGrid phantom_log(std::size_t n) {
  return to_log_domain(generate(two_phase_preset(n, 0.05, 0.4, Composition::multiplicative, 7)).f);
}

void BM_Grad(benchmark::State& state) {
  const ImageGrid u = noise_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(grad(u));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(u.size()));
}
BENCHMARK(BM_Grad)->Arg(64)->Arg(128)->Arg(256);

void BM_SolveUv(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ImageGrid f = noise_grid(n);
  SpectralSolver solver(compute_symbols(n), ModelParams(0.1, 1000.0), 1e-8, 10.0);
  const GradientField q(n), mu(n);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(f, f, q, mu));
}
BENCHMARK(BM_SolveUv)->Arg(64)->Arg(128)->Arg(256);

void BM_AdmmSolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ImageGrid f = phantom_log(n);
  const ModelParams m(0.3, 1000.0);
  const ImageGrid g = grad_norms(grad(f));
  SupportSet support(n, true);
  ImageGrid w(n);
  for (std::size_t k = 0; k < g.size(); ++k) w.data()[k] = m.potential.derivative(std::max(g.data()[k], 1e-3));
  const OperatorSymbols sym = compute_symbols(n);
  for (auto _ : state) benchmark::DoNotOptimize(admm_solve(f, f, f, w, support, m, 1e-8, AdmmParams{}, sym));
}
BENCHMARK(BM_AdmmSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const ImageGrid f = phantom_log(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(f, ModelParams(0.3, 1000.0)));
}
BENCHMARK(BM_Decompose)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Segment(benchmark::State& state) {
  const ImageGrid u = noise_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(segment(u, 5));
}
BENCHMARK(BM_Segment)->Arg(128)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
