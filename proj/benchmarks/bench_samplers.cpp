#include <benchmark/benchmark.h>

#include "pdmp/bench.hpp"
#include "pdmp/rng.hpp"
#include "pdmp/simulate.hpp"

namespace {

const pdmp::ModelSpec&
preset(int index)
{
  return pdmp::model_presets().at(static_cast<std::size_t>(index)).model;
}

void
BM_SampleNext(benchmark::State& state)
{
  const auto& model = preset(static_cast<int>(state.range(0)));
  pdmp::ExponentialStream stream(1);
  double z = 1.0;
  for (auto _ : state) {
    z = pdmp::sample_next(model, z, stream.next());
    benchmark::DoNotOptimize(z);
  }
  state.SetLabel(pdmp::model_presets()[state.range(0)].name);
}
BENCHMARK(BM_SampleNext)->DenseRange(0, 9);

void
BM_SampleNextGeneric(benchmark::State& state)
{
  const auto& model = preset(static_cast<int>(state.range(0)));
  pdmp::ExponentialStream stream(1);
  double z = 1.0;
  for (auto _ : state) {
    z = pdmp::sample_next_generic(model, z, stream.next());
    benchmark::DoNotOptimize(z);
  }
  state.SetLabel(pdmp::model_presets()[state.range(0)].name);
}
BENCHMARK(BM_SampleNextGeneric)->DenseRange(0, 9);

void
BM_SimulateChain(benchmark::State& state)
{
  const auto& model = preset(0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pdmp::simulate_chain(model, 1.0, n, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateChain)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
