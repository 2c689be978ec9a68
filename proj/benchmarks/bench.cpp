// Microbenchmarks for the hot paths: model construction, game solving,
// and the closed-loop torque evaluation.
#include <benchmark/benchmark.h>

#include "vcz/baseline.hpp"
#include "vcz/confinement.hpp"
#include "vcz/synthesis.hpp"

namespace {

using namespace vcz;

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

void BM_BuildModel1D(benchmark::State& state) {
  const auto cells = static_cast<double>(state.range(0));
  const GridSpec grid(IntervalBox(v1(-0.2), v1(0.2)), v1(0.4 / cells));
  const InputGrid inputs = InputGrid::extremes_and_zero(v1(0.07));
  for (auto _ : state) {
    SymbolicModel m = build_model(grid, inputs, 0.1);
    benchmark::DoNotOptimize(m.succ.data());
  }
  state.counters["cells"] = cells;
}
BENCHMARK(BM_BuildModel1D)->Arg(100)->Arg(1000)->Arg(10000);

void BM_BuildModel2D(benchmark::State& state) {
  const auto per_axis = static_cast<double>(state.range(0));
  const GridSpec grid(IntervalBox(v2(-1, -1), v2(1, 1)),
                      Vec::Constant(2, 2.0 / per_axis));
  const InputGrid inputs = InputGrid::extremes_and_zero(v2(0.12, 0.12));
  for (auto _ : state) {
    SymbolicModel m = build_model(grid, inputs, 0.1);
    benchmark::DoNotOptimize(m.succ.data());
  }
  state.counters["cells"] = per_axis * per_axis;
}
BENCHMARK(BM_BuildModel2D)->Arg(50)->Arg(100)->Arg(200);

void BM_SolveReachAvoid(benchmark::State& state) {
  const auto per_axis = static_cast<double>(state.range(0));
  const GridSpec grid(IntervalBox(v2(-1, -1), v2(1, 1)),
                      Vec::Constant(2, 2.0 / per_axis));
  const SymbolicModel m =
      build_model(grid, InputGrid::extremes_and_zero(v2(0.12, 0.12)), 0.1);
  RasSequence seq;
  RasTask t;
  t.stay = IntervalBox(v2(-1, -1), v2(1, 1));
  t.goals = {IntervalBox(v2(0.7, -0.8), v2(0.8, -0.7))};
  seq.tasks.push_back(t);
  const TightenedSequence tight =
      tighten(seq, 0.019, Vec::Constant(2, 0.012 / 2.0 + 2.0 / per_axis));
  const auto sets = abstract_sets(tight, grid);
  for (auto _ : state) {
    TaskController tc =
        solve_reach_avoid(m, sets[0].goal, sets[0].unsafe, sets[0].stay);
    benchmark::DoNotOptimize(tc.value.data());
  }
  state.counters["transitions"] = static_cast<double>(m.num_transitions());
}
// the tightening margin shrinks with eta, so the goal only survives
// erosion on sufficiently fine grids
BENCHMARK(BM_SolveReachAvoid)->Arg(200)->Arg(320)->Arg(400);

void BM_FullStateModel(benchmark::State& state) {
  const Plant plant = make_pendulum(1.0 / 9.0, 3.0, 9.81);
  const auto per_axis = static_cast<double>(state.range(0));
  const GridSpec grid(IntervalBox(v2(-0.2, -0.1), v2(0.2, 0.1)),
                      v2(0.4 / per_axis, 0.2 / per_axis));
  const GrowthBound growth = pendulum_growth(3.0, 9.81);
  const InputGrid torques(v1(0.6), {11});
  for (auto _ : state) {
    SymbolicModel m = build_fullstate_model(plant, grid, torques, 0.1, growth);
    benchmark::DoNotOptimize(m.succ.data());
  }
  state.counters["cells"] = per_axis * per_axis;
}
BENCHMARK(BM_FullStateModel)->Arg(25)->Arg(50)->Arg(100);

void BM_TorqueEvaluation(benchmark::State& state) {
  PsiConfig psi;
  FunnelParams fp;
  fp.p_v = v2(0.1, 0.1);
  fp.q_v = v2(0.02, 0.02);
  fp.mu_v = v2(2.0, 2.0);
  const Vec tau_bar = v2(10.0, 10.0);
  const Vec v_bar = v2(0.2, 0.2);
  const Vec x = v2(0.31, -0.12), v = v2(0.05, -0.02), xi = v2(0.3, -0.1);
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-4;
    Vec tau = torque(x, v, xi, t, fp, psi, tau_bar, v_bar, 0.019);
    benchmark::DoNotOptimize(tau.data());
  }
}
BENCHMARK(BM_TorqueEvaluation);

}  // namespace

BENCHMARK_MAIN();
