#include <benchmark/benchmark.h>

#include "pdmp/bench.hpp"
#include "pdmp/density.hpp"
#include "pdmp/jumprate.hpp"
#include "pdmp/simulate.hpp"

namespace {

struct Fixture
{
  pdmp::ModelPreset preset = *pdmp::find_preset("tcp-k0.5-const");
  pdmp::JumpChain chain;
  explicit Fixture(std::size_t n)
    : chain(pdmp::simulate_chain(preset.model, 1.0, n, 11))
  {
  }
};

void
BM_Coefficients(benchmark::State& state)
{
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const pdmp::TrigBasis basis(6);
  const std::size_t m = pdmp::TrigBasis::max_model_index(f.chain.transitions());
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdmp::coefficients(f.chain, basis, m));
  }
}
BENCHMARK(BM_Coefficients)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void
BM_DenominatorDirect(benchmark::State& state)
{
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const auto grid = pdmp::uniform_grid(f.preset.interval, 513);
  for (auto _ : state) {
    double s = 0;
    for (double y : grid) {
      s += pdmp::d_hat(f.chain, f.preset.model, y);
    }
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_DenominatorDirect)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void
BM_DenominatorSorted(benchmark::State& state)
{
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const auto grid = pdmp::uniform_grid(f.preset.interval, 513);
  for (auto _ : state) {
    const pdmp::DenominatorEstimator d(f.chain, f.preset.model.flow, f.preset.model.map);
    double s = 0;
    for (double y : grid) {
      s += d(y);
    }
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_DenominatorSorted)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void
BM_OracleSweep(benchmark::State& state)
{
  const Fixture f(static_cast<std::size_t>(state.range(0)));
  const pdmp::DensityFit fit = pdmp::select_model(f.chain, pdmp::TrigBasis(6));
  const auto& rate = f.preset.model.rate;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdmp::oracle_dimension(
      fit, f.chain, f.preset.model.flow, f.preset.model.map,
      [&rate](double y) { return rate.rate(y); }, f.preset.interval));
  }
}
BENCHMARK(BM_OracleSweep)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void
BM_Replicate(benchmark::State& state)
{
  const auto p = *pdmp::find_preset("tcp-k0.5-const");
  pdmp::ExperimentConfig cfg{ p.model, p.interval };
  const auto n = static_cast<std::size_t>(state.range(0));
  cfg.n_values = { n };
  std::size_t r = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdmp::run_replicate(cfg, n, r++));
  }
}
BENCHMARK(BM_Replicate)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

} // namespace
