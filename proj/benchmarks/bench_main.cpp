#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "dshock/cascade.hpp"
#include "dshock/integrator.hpp"
#include "dshock/mollifier.hpp"
#include "dshock/transport.hpp"

using namespace dshock;

namespace {

Field noise(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1, 1);
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = d(rng);
  return f;
}

void BM_TransportRhs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g = Grid::make(1, n);
  const Field X = noise(g, 1), u = noise(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(transport_rhs(X, u, g.spacing(), 2.0));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(n));
}
BENCHMARK(BM_TransportRhs)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);

void BM_Convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid g = Grid::make(1, n);
  const Field f = noise(g, 3);
  const Kernel k = build_kernel(g, 0.3, g.spacing());
  const auto method = state.range(1) ? ConvolutionMethod::Spectral : ConvolutionMethod::Direct;
  for (auto _ : state) benchmark::DoNotOptimize(convolve(f, k, method));
  state.SetLabel(std::to_string(2 * k.half_width + 1) + " taps");
}
BENCHMARK(BM_Convolve)->ArgsProduct({{1 << 10, 1 << 13, 1 << 16}, {0, 1}});

void BM_CascadeStep(benchmark::State& state) {
  Problem p;
  p.params.epsilon = 2 * std::numbers::pi / static_cast<double>(state.range(0));
  p.velocity.left = 2;
  p.velocity.right = 1;
  p.initial["v"] = InitialData::riemann(2, 1);
  const auto model = make_model(p);
  CascadeState s = model->initial_state();
  const double dt = stable_dt(model->epsilon(), 0.5, model->speed_bound());
  for (auto _ : state) euler_step(*model, s, dt);
}
BENCHMARK(BM_CascadeStep)->Arg(1 << 11)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
