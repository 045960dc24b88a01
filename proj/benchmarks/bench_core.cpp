#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "t1track/estimator.hpp"
#include "t1track/gamma_posterior.hpp"
#include "t1track/qubit_simulator.hpp"
#include "t1track/rng.hpp"
#include "t1track/spectral.hpp"
#include "t1track/wait_optimizer.hpp"

namespace {

using namespace t1track;

void BM_Update(benchmark::State& state) {
  const SpamModel spam(0.11, 0.14);
  GammaPosterior p(3.0, 450e-6);
  int m = 0;
  for (auto _ : state) {
    GammaPosterior q = update(p, outcome_from_int(m), 150e-6, spam);
    benchmark::DoNotOptimize(q);
    m ^= 1;
  }
}
BENCHMARK(BM_Update);

// Full 30-shot repetition including simulation, as run on-line between lab probes.
void BM_RunEstimation(benchmark::State& state) {
  RateProcessSpec spec;
  spec.gamma_base = 1.0 / 159e-6;
  SimulatedQubit qubit(spec, SpamModel(0.11, 0.14), 23.2e-6, 7);
  EstimationConfig cfg;
  cfg.spam = SpamModel(0.11, 0.14);
  cfg.stop.max_shots = static_cast<std::size_t>(state.range(0));
  cfg.keep_history = false;
  for (auto _ : state) {
    EstimationRun run = run_estimation(qubit, cfg);
    benchmark::DoNotOptimize(run.final_posterior);
  }
}
BENCHMARK(BM_RunEstimation)->Arg(30)->Arg(100);

void BM_TauOptNumeric(benchmark::State& state) {
  const ExperimentBudget budget = ExperimentBudget::time_limited(23.2e-6);
  const SpamModel spam(0.11, 0.14);
  for (auto _ : state) benchmark::DoNotOptimize(tau_opt_numeric(1e4, budget, spam));
}
BENCHMARK(BM_TauOptNumeric);

UniformTrace white_trace(std::size_t n) {
  CounterRng rng = CounterRng::stream(3, 0);
  UniformTrace t;
  t.dt_s = 0.01;
  t.values.resize(n);
  for (double& v : t.values) v = rng.normal();
  return t;
}

void BM_WelchPsd(benchmark::State& state) {
  const UniformTrace t = white_trace(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(welch_psd(t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WelchPsd)->Arg(1 << 14)->Arg(1 << 18);

void BM_AllanDeviation(benchmark::State& state) {
  const UniformTrace t = white_trace(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> taus = allan_taus(t);
  for (auto _ : state) benchmark::DoNotOptimize(allan_deviation(t, taus));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AllanDeviation)->Arg(1 << 14)->Arg(1 << 18);

}  // namespace

BENCHMARK_MAIN();
