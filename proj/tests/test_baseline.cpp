#include <cmath>

#include "doctest.h"
#include "vcz/baseline.hpp"

using namespace vcz;

namespace {
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

PendulumBenchConfig bench_config() {
  PendulumBenchConfig cfg;
  cfg.angle_domain = IntervalBox(v1(-0.2), v1(0.2));
  cfg.velocity_domain = IntervalBox(v1(-0.1), v1(0.1));
  cfg.goal = IntervalBox(v1(0.05), v1(0.2));
  cfg.eta_angle = 0.004;
  cfg.eta_velocity = 0.004;
  cfg.h = 0.1;
  cfg.u_bar = 0.07;
  return cfg;
}
}  // namespace

TEST_CASE("growth radius matches the matrix exponential in closed form") {
  // a zero rate leaves the radius unchanged
  GrowthBound still;
  still.rate.setZero(2, 2);
  const Vec r0 = v2(0.01, 0.02);
  CHECK(still.radius(r0, 1.0)[0] == doctest::Approx(0.01));
  CHECK(still.radius(r0, 1.0)[1] == doctest::Approx(0.02));

  // companion form [[0,1],[c,0]]: exp = [[cosh, sinh/s],[s*sinh, cosh]],
  // s = sqrt(c)
  const GrowthBound g = pendulum_growth(3.0, 9.81);
  const double c = 3.0 * 9.81 / 6.0;
  const double s = std::sqrt(c), h = 0.1;
  const Vec r = g.radius(r0, h);
  const double expect0 =
      std::cosh(s * h) * r0[0] + std::sinh(s * h) / s * r0[1];
  const double expect1 =
      s * std::sinh(s * h) * r0[0] + std::cosh(s * h) * r0[1];
  CHECK(r[0] == doctest::Approx(expect0).epsilon(1e-10));
  CHECK(r[1] == doctest::Approx(expect1).epsilon(1e-10));

  CHECK_THROWS_AS(g.radius(v1(0.01), 0.1), ContractViolation);
}

TEST_CASE("full-state abstraction sizes and equilibrium behaviour") {
  const Plant plant = make_pendulum(1.0 / 9.0, 3.0, 9.81);
  const GridSpec grid(IntervalBox(v2(-0.2, -0.1), v2(0.2, 0.1)),
                      v2(0.01, 0.01));
  CHECK(grid.num_cells() == 800);
  const InputGrid torques(v1(2.0), {5});
  const SymbolicModel m = build_fullstate_model(
      plant, grid, torques, 0.1, pendulum_growth(3.0, 9.81));
  CHECK(m.num_pairs() == 4000);
  CHECK(m.offsets.back() == m.succ.size());
  CHECK(transition_bytes(m) ==
        m.succ.size() * 4 + m.offsets.size() * 8);

  // the upright rest cell with zero torque keeps itself as a successor
  const auto eq = grid.quantize_flat(v2(0.0, 0.0));
  REQUIRE(eq.has_value());
  std::size_t u0 = 0;
  for (std::size_t i = 0; i < m.inputs.size(); ++i)
    if (m.inputs[i][0] == 0.0) u0 = i;
  const auto post = m.post(*eq, u0);
  REQUIRE(!post.empty());
  CHECK(std::binary_search(post.begin(), post.end(),
                           static_cast<std::uint32_t>(*eq)));

  // near the velocity rim, max torque pushes the reach set off the grid
  const auto rim = grid.quantize_flat(v2(0.0, 0.099));
  REQUIRE(rim.has_value());
  std::size_t umax = 0;
  for (std::size_t i = 0; i < m.inputs.size(); ++i)
    if (m.inputs[i][0] == 2.0) umax = i;
  CHECK(m.post(*rim, umax).empty());

  CHECK_THROWS_AS(build_fullstate_model(plant, GridSpec(IntervalBox(v1(0), v1(1)), v1(0.1)),
                                        torques, 0.1, pendulum_growth(3.0, 9.81)),
                  ContractViolation);
}

TEST_CASE("true trajectories land inside the abstract successors") {
  const Plant plant = make_pendulum(1.0 / 9.0, 3.0, 9.81);
  const GridSpec grid(IntervalBox(v2(-0.2, -0.1), v2(0.2, 0.1)),
                      v2(0.01, 0.01));
  const SymbolicModel m = build_fullstate_model(
      plant, grid, InputGrid(v1(2.0), {7}), 0.1, pendulum_growth(3.0, 9.81));
  const SoundnessReport rep = audit_fullstate_soundness(plant, m, 10000, 31);
  CHECK(rep.pass);
  CHECK(rep.failures == 0);
  // most sampled pairs are blocked (large torques push the reach set off
  // the narrow velocity band), so only a fraction of trials are checkable
  CHECK(rep.checked > 1000);
}

TEST_CASE("the comparison table pits the two abstractions on one task") {
  BenchmarkTable table = run_pendulum_comparison(bench_config());
  REQUIRE(table.rows.size() == 2);
  const auto& zone = table.rows[0];
  const auto& full = table.rows[1];
  CHECK(zone.ran);
  CHECK(full.ran);
  CHECK(zone.cells == 100);
  CHECK(full.cells == 5000);
  CHECK(zone.domain > 0);
  CHECK(full.domain > 0);
  CHECK(zone.bytes < full.bytes);
  CHECK(table.memory_reduction_pct > 50.0);
  CHECK(table.time_reduction_pct > 0.0);

  append_arm_rows(table, 0.01, 0.1, 0.12);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.rows[2].ran);
  CHECK(table.rows[2].cells == 40000);
  CHECK(!table.rows[3].ran);

  const std::string md = to_markdown(table);
  CHECK(md.find("| scenario |") != std::string::npos);
  CHECK(md.find("not run") != std::string::npos);
  CHECK(md.find("time reduction:") != std::string::npos);

  const std::string csv = to_csv(table);
  CHECK(csv.rfind("scenario,build_s,", 0) == 0);
  CHECK(csv.find("not run,not run,not run,not run,not run,not run") !=
        std::string::npos);
  CHECK(csv.find("memory_reduction_pct,") != std::string::npos);
}

TEST_CASE("transition tables blow up with state dimension") {
  // halving eta on the 1-D zone grid doubles cells; on the 2-D full-state
  // grid it quadruples them, so the footprint gap widens
  const Plant plant = make_pendulum(1.0 / 9.0, 3.0, 9.81);
  const GrowthBound g = pendulum_growth(3.0, 9.81);
  auto full_bytes = [&](double eta) {
    const GridSpec grid(IntervalBox(v2(-0.2, -0.1), v2(0.2, 0.1)), v2(eta, eta));
    return transition_bytes(
        build_fullstate_model(plant, grid, InputGrid(v1(2.0), {3}), 0.1, g));
  };
  auto zone_bytes = [&](double eta) {
    const GridSpec grid(IntervalBox(v1(-0.2), v1(0.2)), v1(eta));
    return transition_bytes(
        build_model(grid, InputGrid::extremes_and_zero(v1(0.07)), 0.1));
  };
  const double gap_coarse =
      static_cast<double>(full_bytes(0.02)) / zone_bytes(0.02);
  const double gap_fine =
      static_cast<double>(full_bytes(0.01)) / zone_bytes(0.01);
  CHECK(gap_fine > 1.5 * gap_coarse);
}
