#include <benchmark/benchmark.h>

#include "reopen/dataset.hpp"

using namespace reopen;

namespace {

const Dataset& bundled() {
  static const Dataset d = load_dataset(REOPEN_BENCH_DATA_DIR);
  return d;
}

void BM_Step(benchmark::State& state) {
  const auto& in = bundled().inputs;
  const Model m = make_model(in.economy, in.criticality, in.targets, in.params);
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  const auto sched = build_schedule(in.economy, in.calibration, s, in.params, 10000);
  SimState st = init_steady_state(in.economy, in.targets, in.params);
  for (auto _ : state) {
    if (st.t == 10000) st = init_steady_state(in.economy, in.targets, in.params);
    step(st, m, sched);
    benchmark::DoNotOptimize(st.x.data());
  }
}
BENCHMARK(BM_Step);

void BM_FullRun(benchmark::State& state) {
  const auto& in = bundled().inputs;
  const Model m = make_model(in.economy, in.criticality, in.targets, in.params);
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  const int horizon = static_cast<int>(state.range(0));
  const auto sched = build_schedule(in.economy, in.calibration, s, in.params, horizon);
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(m, sched, horizon).x.back());
}
BENCHMARK(BM_FullRun)->Arg(180)->Arg(365)->Unit(benchmark::kMillisecond);

void BM_SyntheticRun(benchmark::State& state) {
  const auto b = generate_synthetic_economy(static_cast<int>(state.range(0)), 1);
  EconParams p;
  const Scenario s = make_scenario(ScenarioId::Lockdown, b.calibration);
  const Model m = make_model(b.economy, b.criticality, b.targets, p);
  const auto sched = build_schedule(b.economy, b.calibration, s, p, 180);
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(m, sched, 180).x.back());
}
BENCHMARK(BM_SyntheticRun)->Arg(10)->Arg(55)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Ensemble(benchmark::State& state) {
  const auto b = generate_synthetic_economy(10, 77);
  ModelInputs in{b.economy, b.criticality, b.calibration, b.targets, EconParams{}};
  const Scenario s = make_scenario(ScenarioId::Lockdown, in.calibration);
  for (auto _ : state)
    benchmark::DoNotOptimize(perturbation_ensemble(in, s, 180, 0.2, static_cast<int>(state.range(0)), 1).median);
}
BENCHMARK(BM_Ensemble)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BetaTotal(benchmark::State& state) {
  const auto& d = bundled();
  const auto L = policy_lambda(ScenarioId::Open, d.inputs.calibration);
  for (auto _ : state) benchmark::DoNotOptimize(beta_total(L, d.epi).total);
}
BENCHMARK(BM_BetaTotal);

void BM_ScenarioReport(benchmark::State& state) {
  const auto& d = bundled();
  std::vector<Scenario> all;
  for (auto id : named_scenarios()) all.push_back(make_scenario(id, d.inputs.calibration));
  for (auto _ : state) benchmark::DoNotOptimize(scenario_report(all, d.inputs, d.epi).rows.size());
}
BENCHMARK(BM_ScenarioReport)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
