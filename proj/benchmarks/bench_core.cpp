#include <benchmark/benchmark.h>

#include "doubtfire/criteria.hpp"
#include "doubtfire/harness.hpp"
#include "doubtfire/solver.hpp"

using namespace doubtfire;

static void BM_PredictorTask(benchmark::State& state) {
  const Solver solver(Grid{20, static_cast<int>(state.range(1))}, SolverOptions{.order = static_cast<int>(state.range(0))});
  const SolverState s = solver.initial_state(InitialCondition::SmoothWave);
  std::uint32_t cell = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver.predictor_task(cell, s));
    cell = (cell + 1) % static_cast<std::uint32_t>(s.field.size());
  }
}
BENCHMARK(BM_PredictorTask)->Args({2, 1})->Args({3, 1})->Args({5, 1})->Args({3, 2});

static void BM_EvaluateCriteria(benchmark::State& state) {
  const Solver solver(Grid{20, 1}, SolverOptions{});
  const SolverState s = solver.initial_state(InitialCondition::SmoothWave);
  const TaskOutcome next = solver.predictor_task(3, s);
  CriteriaConfig cfg;
  cfg.cell_width = solver.grid().cell_width();
  cfg.tol = {0.0, 0.0, 0.0, state.range(0) ? EvaluationMode::Rigorous : EvaluationMode::Lazy};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(next.payload, s.field[3], next.local_dt, s.global_dt, cfg));
  }
}
BENCHMARK(BM_EvaluateCriteria)->Arg(0)->Arg(1);

static void BM_RunSimulation(benchmark::State& state) {
  SimConfig config;
  config.steps = 20;
  config.trace = false;
  config.tol.mode = state.range(0) ? EvaluationMode::Rigorous : EvaluationMode::Lazy;
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(config));
}
BENCHMARK(BM_RunSimulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
