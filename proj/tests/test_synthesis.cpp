#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "vcz/synthesis.hpp"

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

// 10-cell chain on [0,1] where each non-zero input shifts exactly one cell
SymbolicModel chain_model() {
  const GridSpec grid(IntervalBox(v1(0.0), v1(1.0)), v1(0.1));
  return build_model(grid, InputGrid::extremes_and_zero(v1(0.1)), 1.0);
}

std::vector<std::uint32_t> all_cells(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint32_t>(i);
  return v;
}

// Hand-rolled CSR model for solver stress tests: `succ[c][u]` lists, empty
// meaning blocked.
SymbolicModel make_raw_model(std::size_t ncells, std::size_t ninputs,
                             const std::vector<std::vector<std::vector<std::uint32_t>>>& succ) {
  SymbolicModel m;
  m.grid = GridSpec(IntervalBox(v1(0.0), v1(static_cast<double>(ncells))), v1(1.0));
  m.h = 1.0;
  for (std::size_t u = 0; u < ninputs; ++u) m.inputs.push_back(v1(0.0));
  m.offsets.assign(ncells * ninputs + 1, 0);
  for (std::size_t c = 0; c < ncells; ++c)
    for (std::size_t u = 0; u < ninputs; ++u) {
      const std::size_t p = c * ninputs + u;
      m.offsets[p + 1] = m.offsets[p] + succ[c][u].size();
      m.succ.insert(m.succ.end(), succ[c][u].begin(), succ[c][u].end());
    }
  return m;
}

// Set-based fixed-point iteration, the slow reference for the game solver.
std::vector<std::int32_t> oracle_reach_avoid(
    const SymbolicModel& m, const std::vector<std::uint32_t>& goal,
    const std::vector<std::uint32_t>& unsafe,
    const std::vector<std::uint32_t>& stay) {
  const std::size_t n = m.grid.num_cells();
  std::vector<std::uint8_t> bad(n, 0), in_stay(n, 0), win(n, 0);
  for (auto c : unsafe) bad[c] = 1;
  for (auto c : stay) in_stay[c] = 1;
  std::vector<std::int32_t> value(n, -1);
  for (auto g : goal)
    if (!bad[g]) {
      win[g] = 1;
      value[g] = 0;
    }
  for (std::int32_t level = 1;; ++level) {
    bool changed = false;
    std::vector<std::uint8_t> next = win;
    for (std::size_t c = 0; c < n; ++c) {
      if (win[c] || !in_stay[c] || bad[c]) continue;
      for (std::size_t u = 0; u < m.num_inputs(); ++u) {
        const auto post = m.post(c, u);
        if (post.empty()) continue;
        if (std::all_of(post.begin(), post.end(),
                        [&](std::uint32_t s) { return win[s] != 0; })) {
          next[c] = 1;
          value[c] = level;
          changed = true;
          break;
        }
      }
    }
    win.swap(next);
    if (!changed) break;
  }
  return value;
}

std::vector<std::uint8_t> oracle_invariance(const SymbolicModel& m,
                                            const std::vector<std::uint32_t>& safe) {
  const std::size_t n = m.grid.num_cells();
  std::vector<std::uint8_t> z(n, 0);
  for (auto c : safe) z[c] = 1;
  for (;;) {
    bool changed = false;
    for (std::size_t c = 0; c < n; ++c) {
      if (!z[c]) continue;
      bool keep = false;
      for (std::size_t u = 0; u < m.num_inputs() && !keep; ++u) {
        const auto post = m.post(c, u);
        keep = !post.empty() &&
               std::all_of(post.begin(), post.end(),
                           [&](std::uint32_t s) { return z[s] != 0; });
      }
      if (!keep) {
        z[c] = 0;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return z;
}
}  // namespace

TEST_CASE("robustness margin combines drift and quantization") {
  CHECK(compute_delta(v1(0.1), 0.1, v1(0.01)).delta[0] == doctest::Approx(0.015));
  const Margin m2 = compute_delta(v2(0.1, 0.1), 0.2, v2(0.02, 0.02));
  CHECK(m2.delta[0] == doctest::Approx(0.03));
  CHECK(m2.delta[1] == doctest::Approx(0.03));
  CHECK_THROWS_AS(compute_delta(v1(0.1), 0.0, v1(0.01)), ContractViolation);
  CHECK_THROWS_AS(compute_delta(v1(0.1), 0.1, v2(0.01, 0.01)), ContractViolation);
}

TEST_CASE("reach value equals graph distance on a chain") {
  const SymbolicModel m = chain_model();
  const auto tc = solve_reach_avoid(m, {9}, {}, all_cells(10));
  for (std::size_t c = 0; c < 10; ++c) {
    CHECK(tc.wins(c));
    CHECK(tc.value[c] == static_cast<std::int32_t>(9 - c));
  }
  // a goal cell has zero cost and the self-loop is admissible there
  CHECK(tc.value[9] == 0);
  CHECK(!tc.policy[9].empty());
}

TEST_CASE("goal equal to stay solves in zero steps") {
  const SymbolicModel m = chain_model();
  const auto tc = solve_reach_avoid(m, all_cells(10), {}, all_cells(10));
  for (std::size_t c = 0; c < 10; ++c) CHECK(tc.value[c] == 0);
}

TEST_CASE("an unsafe wall cuts the chain") {
  const SymbolicModel m = chain_model();
  const auto tc = solve_reach_avoid(m, {9}, {4}, all_cells(10));
  for (std::size_t c = 0; c < 4; ++c) CHECK(!tc.wins(c));
  CHECK(!tc.wins(4));
  for (std::size_t c = 5; c < 10; ++c) CHECK(tc.wins(c));

  CHECK_THROWS_AS(solve_reach_avoid(m, {4}, {4}, all_cells(10)), InfeasibleTask);
}

TEST_CASE("invariance keeps every cell when the zero input self-loops") {
  const GridSpec grid(IntervalBox(v1(0.0), v1(1.0)), v1(0.1));
  const SymbolicModel m =
      build_model(grid, InputGrid::extremes_and_zero(v1(0.1)), 0.5);
  const auto tc = solve_invariance(m, all_cells(10));
  for (std::size_t c = 0; c < 10; ++c) {
    CHECK(tc.wins(c));
    CHECK(tc.value[c] == 0);
    CHECK(!tc.policy[c].empty());
  }
}

TEST_CASE("invariance empties on a forced drift chain") {
  // single input always moves right; the last cell is blocked
  const SymbolicModel m = make_raw_model(3, 1, {{{1}}, {{2}}, {{}}});
  CHECK_THROWS_AS(solve_invariance(m, {0, 1, 2}), InfeasibleTask);
  // adding a self-loop at the end rescues the whole chain
  const SymbolicModel m2 = make_raw_model(3, 1, {{{1}}, {{2}}, {{2}}});
  const auto tc = solve_invariance(m2, {0, 1, 2});
  CHECK(tc.domain_size() == 3);
}

TEST_CASE("retained inputs keep all successors winning") {
  const GridSpec grid(IntervalBox(v2(0, 0), v2(1, 1)), v2(0.1, 0.1));
  const SymbolicModel m =
      build_model(grid, InputGrid::extremes_and_zero(v2(0.1, 0.1)), 0.5);
  const auto goal = std::vector<std::uint32_t>{77};
  const auto tc = solve_reach_avoid(m, goal, {33, 34, 43, 44}, all_cells(100));
  for (std::size_t c = 0; c < 100; ++c) {
    if (!tc.wins(c)) {
      CHECK(tc.policy[c].empty());
      continue;
    }
    std::set<std::uint16_t> retained(tc.policy[c].begin(), tc.policy[c].end());
    for (std::size_t u = 0; u < m.num_inputs(); ++u) {
      const auto post = m.post(c, u);
      const bool all_win =
          !post.empty() && std::all_of(post.begin(), post.end(),
                                       [&](std::uint32_t s) { return tc.wins(s); });
      CHECK(all_win == (retained.count(static_cast<std::uint16_t>(u)) != 0));
    }
  }
}

TEST_CASE("solver matches the set-based iteration on random models") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(unit(rng) * 12);
    const std::size_t k = 1 + static_cast<std::size_t>(unit(rng) * 3);
    std::vector<std::vector<std::vector<std::uint32_t>>> succ(
        n, std::vector<std::vector<std::uint32_t>>(k));
    for (auto& per_cell : succ)
      for (auto& per_input : per_cell) {
        if (unit(rng) < 0.15) continue;  // blocked
        std::set<std::uint32_t> s;
        const int cnt = 1 + static_cast<int>(unit(rng) * 3);
        for (int j = 0; j < cnt; ++j)
          s.insert(static_cast<std::uint32_t>(unit(rng) * n));
        per_input.assign(s.begin(), s.end());
      }
    const SymbolicModel m = make_raw_model(n, k, succ);

    std::vector<std::uint32_t> goal, unsafe, stay;
    for (std::uint32_t c = 0; c < n; ++c) {
      if (unit(rng) < 0.25) goal.push_back(c);
      if (unit(rng) < 0.1) unsafe.push_back(c);
      if (unit(rng) < 0.9) stay.push_back(c);
    }
    if (goal.empty()) goal.push_back(0);
    stay.insert(stay.end(), goal.begin(), goal.end());
    std::sort(stay.begin(), stay.end());
    stay.erase(std::unique(stay.begin(), stay.end()), stay.end());

    const auto expect = oracle_reach_avoid(m, goal, unsafe, stay);
    bool feasible = false;
    for (auto g : goal)
      if (std::find(unsafe.begin(), unsafe.end(), g) == unsafe.end())
        feasible = true;
    if (!feasible) {
      CHECK_THROWS_AS(solve_reach_avoid(m, goal, unsafe, stay), InfeasibleTask);
      continue;
    }
    const auto tc = solve_reach_avoid(m, goal, unsafe, stay);
    for (std::size_t c = 0; c < n; ++c) CHECK(tc.value[c] == expect[c]);

    const auto safe = stay;
    const auto zref = oracle_invariance(m, safe);
    const bool any = std::any_of(zref.begin(), zref.end(),
                                 [](std::uint8_t b) { return b != 0; });
    if (!any) {
      CHECK_THROWS_AS(solve_invariance(m, safe), InfeasibleTask);
    } else {
      const auto inv = solve_invariance(m, safe);
      for (std::size_t c = 0; c < n; ++c)
        CHECK(inv.wins(c) == (zref[c] != 0));
    }
  }
}

TEST_CASE("task sequences compose through shared goal cells") {
  const SymbolicModel m = chain_model();
  TightenedSequence tight;
  RasTask a, b;
  a.stay = IntervalBox(v1(0.0), v1(1.0));
  b.stay = a.stay;
  a.goals = {IntervalBox(v1(0.5), v1(0.6))};
  b.goals = {IntervalBox(v1(0.8), v1(0.9))};
  tight.tasks = {a, b};
  tight.margin_used = v1(0.0);
  const auto sets = abstract_sets(tight, m.grid);
  const auto ctrl = synthesize_sequence(m, sets, tight);
  REQUIRE(ctrl.tasks.size() == 2);
  CHECK(ctrl.tasks[0].wins(0));
  CHECK(ctrl.tasks[0].goal_cells == std::vector<std::uint32_t>{5});
  CHECK(ctrl.tasks[1].wins(5));
}

TEST_CASE("handover into a non-winning region is rejected") {
  const SymbolicModel m = chain_model();
  TightenedSequence tight;
  RasTask a, b;
  a.stay = IntervalBox(v1(0.0), v1(1.0));
  a.goals = {IntervalBox(v1(0.19), v1(0.31))};
  // the second task's stay region excludes the first task's goal cell
  b.stay = IntervalBox(v1(0.6), v1(1.0));
  b.goals = {IntervalBox(v1(0.8), v1(0.9))};
  tight.tasks = {a, b};
  tight.margin_used = v1(0.0);
  const auto sets = abstract_sets(tight, m.grid);
  CHECK_THROWS_AS(synthesize_sequence(m, sets, tight), CompositionError);
}

TEST_CASE("the refined policy descends the value and reaches the goal") {
  const SymbolicModel m = chain_model();
  const auto tc = solve_reach_avoid(m, {9}, {}, all_cells(10));
  const ConcretePolicy pol(m, tc);

  Vec xi = m.grid.cell_center(0);
  std::int32_t prev = tc.value[0];
  for (int step = 0; step < 9; ++step) {
    CHECK(pol.in_domain(xi));
    const Vec u = pol.select(xi);
    xi += m.h * u;
    const auto c = m.grid.quantize_flat(xi);
    REQUIRE(c.has_value());
    CHECK(tc.value[*c] < prev);
    prev = tc.value[*c];
  }
  CHECK(prev == 0);
  // at the goal the zero input is the cheapest admissible choice
  CHECK(pol.select_index(xi) == 0);

  CHECK_THROWS_AS(pol.select(v1(5.0)), OutsideDomain);
  const auto cut = solve_reach_avoid(m, {9}, {4}, all_cells(10));
  const ConcretePolicy cut_pol(m, cut);
  CHECK(!cut_pol.in_domain(m.grid.cell_center(2)));
  CHECK_THROWS_AS(cut_pol.select(m.grid.cell_center(2)), OutsideDomain);
}
