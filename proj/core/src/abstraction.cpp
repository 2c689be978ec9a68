#include "vcz/abstraction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace vcz {

namespace {
constexpr double kSnapTol = 1e-9;
}

InputGrid::InputGrid(Vec u_bar, std::vector<int> samples)
    : bound(std::move(u_bar)), samples_per_axis(std::move(samples)) {
  if (bound.size() == 0) throw ContractViolation("InputGrid: empty bound");
  if ((bound.array() <= 0.0).any())
    throw ContractViolation("InputGrid: u_bar must be positive");
  if (samples_per_axis.size() != static_cast<std::size_t>(bound.size()))
    throw ContractViolation("InputGrid: samples dimension mismatch");
  for (int k : samples_per_axis)
    if (k < 3 || k % 2 == 0)
      throw ContractViolation("InputGrid: samples per axis must be odd and >= 3");
}

InputGrid InputGrid::extremes_and_zero(Vec u_bar) {
  std::vector<int> s(static_cast<std::size_t>(u_bar.size()), 3);
  return InputGrid(std::move(u_bar), std::move(s));
}

std::vector<Vec> InputGrid::samples() const {
  const int n = static_cast<int>(bound.size());
  std::vector<std::vector<double>> axis(n);
  for (int i = 0; i < n; ++i) {
    const int k = samples_per_axis[i];
    for (int j = 0; j < k; ++j)
      axis[i].push_back(-bound[i] + 2.0 * bound[i] * j / (k - 1));
    axis[i][(k - 1) / 2] = 0.0;  // exact zero at the midpoint
  }
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  for (;;) {
    Vec u(n);
    for (int i = 0; i < n; ++i) u[i] = axis[i][idx[i]];
    out.push_back(u);
    int i = n - 1;
    while (i >= 0 && ++idx[i] == samples_per_axis[i]) idx[i--] = 0;
    if (i < 0) break;
  }
  // magnitude-first ordering: index 0 is the zero input, ties lexicographic
  std::stable_sort(out.begin(), out.end(), [&](const Vec& a, const Vec& b) {
    const double ma = (a.array() / bound.array()).abs().maxCoeff();
    const double mb = (b.array() / bound.array()).abs().maxCoeff();
    if (ma != mb) return ma < mb;
    for (int i = 0; i < n; ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  return out;
}

SymbolicModel build_model(const GridSpec& grid, const InputGrid& inputs, double h) {
  if (h <= 0.0) throw ContractViolation("build_model: h must be positive");
  const int n = grid.dim();
  if (inputs.bound.size() != n)
    throw ContractViolation("build_model: input dimension mismatch");
  for (int i = 0; i < n; ++i) {
    const double width = grid.domain().hi()[i] - grid.domain().lo()[i];
    if (h * inputs.bound[i] >= width)
      throw DegenerateHorizon("build_model: h*u_bar >= domain width on axis " +
                              std::to_string(i));
  }

  SymbolicModel m;
  m.grid = grid;
  m.inputs = inputs.samples();
  m.h = h;
  const std::size_t ncells = grid.num_cells();
  const std::size_t ninputs = m.inputs.size();
  m.offsets.assign(ncells * ninputs + 1, 0);

  const auto& cpa = grid.cells_per_axis();
  const Vec& glo = grid.domain().lo();
  const Vec& eta = grid.eta();

  // per-axis successor index ranges, then the product
  std::vector<std::array<std::int64_t, 2>> range(n);
  std::vector<std::uint32_t> pair_succ;
  for (std::size_t c = 0; c < ncells; ++c) {
    const CellId cell = grid.unflatten(c);
    for (std::size_t ui = 0; ui < ninputs; ++ui) {
      pair_succ.clear();
      const Vec& u = m.inputs[ui];
      bool blocked = false;
      for (int i = 0; i < n && !blocked; ++i) {
        const double rlo = glo[i] + cell.index[i] * eta[i] + h * u[i];
        const double rhi = rlo + eta[i];
        // blocked when the reach box leaves the covered domain
        if (rlo < glo[i] - kSnapTol ||
            rhi > glo[i] + cpa[i] * eta[i] + kSnapTol) {
          blocked = true;
          break;
        }
        const double tlo = (rlo - glo[i]) / eta[i];
        const double thi = (rhi - glo[i]) / eta[i];
        std::int64_t jmin = static_cast<std::int64_t>(std::floor(tlo + kSnapTol));
        std::int64_t jmax = static_cast<std::int64_t>(std::ceil(thi - kSnapTol)) - 1;
        jmin = std::max<std::int64_t>(jmin, 0);
        jmax = std::min<std::int64_t>(jmax, cpa[i] - 1);
        if (jmin > jmax) {
          blocked = true;
          break;
        }
        range[i] = {jmin, jmax};
      }
      if (!blocked) {
        std::vector<std::int64_t> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = range[i][0];
        for (;;) {
          std::size_t flat = 0;
          for (int i = 0; i < n; ++i)
            flat = flat * static_cast<std::size_t>(cpa[i]) +
                   static_cast<std::size_t>(idx[i]);
          pair_succ.push_back(static_cast<std::uint32_t>(flat));
          int i = n - 1;
          while (i >= 0 && ++idx[i] > range[i][1]) idx[i--] = range[i][0];
          if (i < 0) break;
        }
        std::sort(pair_succ.begin(), pair_succ.end());
      }
      const std::size_t p = c * ninputs + ui;
      m.offsets[p + 1] = m.offsets[p] + pair_succ.size();
      m.succ.insert(m.succ.end(), pair_succ.begin(), pair_succ.end());
    }
  }
  return m;
}

std::vector<AbstractTaskSets> abstract_sets(const TightenedSequence& seq,
                                            const GridSpec& grid) {
  std::vector<AbstractTaskSets> out(seq.tasks.size());
  const std::size_t ncells = grid.num_cells();
  for (std::size_t ti = 0; ti < seq.tasks.size(); ++ti) {
    const RasTask& t = seq.tasks[ti];
    if (!grid.covered().intersects(t.stay) || t.stay.is_empty())
      throw ContractViolation("abstract_sets: grid does not cover the stay set");
    AbstractTaskSets& s = out[ti];
    for (std::size_t c = 0; c < ncells; ++c) {
      const IntervalBox box = grid.cell_box(c);
      bool in_goal = false;
      for (const auto& g : t.goals)
        if (g.contains_box(box)) {
          in_goal = true;
          break;
        }
      bool unsafe = false;
      for (const auto& o : t.obstacles)
        if (o.overlaps_interior(box)) {
          unsafe = true;
          break;
        }
      if (in_goal) s.goal.push_back(static_cast<std::uint32_t>(c));
      if (unsafe) s.unsafe.push_back(static_cast<std::uint32_t>(c));
      if (t.stay.contains_box(box)) s.stay.push_back(static_cast<std::uint32_t>(c));
    }
    if (s.goal.empty())
      throw AbstractGoalEmpty("abstract_sets: no cell fits the goal of task " +
                              std::to_string(ti + 1) + "; try a finer eta");
  }
  return out;
}

FrrReport check_frr(const SymbolicModel& model, std::size_t trials,
                    std::uint64_t seed) {
  if (trials < 1) throw ContractViolation("check_frr: trials must be >= 1");
  FrrReport rep;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  const GridSpec& grid = model.grid;
  const int n = grid.dim();
  const IntervalBox cov = grid.covered();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_u(0, model.num_inputs() - 1);

  for (std::size_t k = 0; k < trials; ++k) {
    Vec x(n);
    for (int i = 0; i < n; ++i)
      x[i] = cov.lo()[i] + unit(rng) * (cov.hi()[i] - cov.lo()[i]);
    const std::size_t ui = pick_u(rng);
    const auto cx = grid.quantize_flat(x);
    if (!cx) continue;
    const auto post = model.post(*cx, ui);
    if (post.empty()) continue;  // blocked: controller never issues this input
    ++rep.checked;
    const Vec xn = x + model.h * model.inputs[ui];
    const auto cn = grid.quantize_flat(xn);
    const bool ok =
        cn && std::binary_search(post.begin(), post.end(),
                                 static_cast<std::uint32_t>(*cn));
    if (!ok) {
      rep.pass = false;
      if (rep.counterexamples.size() < 16)
        rep.counterexamples.push_back({x, ui});
    }
  }
  return rep;
}

}  // namespace vcz
