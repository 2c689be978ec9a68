#include "vcz/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "vcz/specification.hpp"

namespace vcz {

namespace {

constexpr double kSnapTol = 1e-9;

Eigen::MatrixXd expm(Eigen::MatrixXd m) {
  // scaling-and-squaring with a Taylor series; matrices here are tiny
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    m *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd term = result;
  for (int k = 1; k <= 24; ++k) {
    term = (term * m) / static_cast<double>(k);
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

Vec GrowthBound::radius(const Vec& r0, double h) const {
  if (rate.rows() != r0.size())
    throw ContractViolation("GrowthBound: dimension mismatch");
  return expm(rate * h) * r0;
}

GrowthBound pendulum_growth(double length, double gravity) {
  GrowthBound g;
  g.rate.setZero(2, 2);
  g.rate(0, 1) = 1.0;
  g.rate(1, 0) = 3.0 * gravity / (2.0 * length);
  return g;
}

SymbolicModel build_fullstate_model(const Plant& plant, const GridSpec& grid,
                                    const InputGrid& torques, double h,
                                    const GrowthBound& growth, int substeps) {
  const int dof = plant.dof;
  if (grid.dim() != 2 * dof)
    throw ContractViolation("build_fullstate_model: grid must cover (x, v)");
  if (h <= 0.0 || substeps < 1)
    throw ContractViolation("build_fullstate_model: bad h or substeps");

  SymbolicModel m;
  m.grid = grid;
  m.inputs = torques.samples();
  m.h = h;
  const std::size_t ncells = grid.num_cells();
  const std::size_t ninputs = m.inputs.size();
  m.offsets.assign(ncells * ninputs + 1, 0);

  const int n = grid.dim();
  const auto& cpa = grid.cells_per_axis();
  const Vec& glo = grid.domain().lo();
  const Vec& eta = grid.eta();
  const Vec r = growth.radius(0.5 * eta, h);
  const Vec d0 = Vec::Zero(dof);
  const double dt = h / substeps;

  std::vector<std::int64_t> jmin(n), jmax(n);
  std::vector<std::uint32_t> pair_succ;
  for (std::size_t c = 0; c < ncells; ++c) {
    const Vec center = grid.cell_center(c);
    for (std::size_t ui = 0; ui < ninputs; ++ui) {
      pair_succ.clear();
      const Vec& tau = m.inputs[ui];
      // RK4 propagation of the cell center under the known dynamics
      Vec x = center.head(dof), v = center.tail(dof);
      for (int s = 0; s < substeps; ++s) {
        const Vec k1v = plant.accel(x, v, tau, d0);
        const Vec x2 = x + 0.5 * dt * v, v2 = v + 0.5 * dt * k1v;
        const Vec k2v = plant.accel(x2, v2, tau, d0);
        const Vec x3 = x + 0.5 * dt * v2, v3 = v + 0.5 * dt * k2v;
        const Vec k3v = plant.accel(x3, v3, tau, d0);
        const Vec x4 = x + dt * v3, v4 = v + dt * k3v;
        const Vec k4v = plant.accel(x4, v4, tau, d0);
        const Vec xn = x + (dt / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
        v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        x = xn;
      }
      Vec end(n);
      end << x, v;
      bool blocked = false;
      for (int i = 0; i < n && !blocked; ++i) {
        const double blo = end[i] - r[i];
        const double bhi = end[i] + r[i];
        const double cover_hi = glo[i] + cpa[i] * eta[i];
        if (blo < glo[i] - kSnapTol || bhi > cover_hi + kSnapTol) {
          blocked = true;
          break;
        }
        const double tlo = (blo - glo[i]) / eta[i];
        const double thi = (bhi - glo[i]) / eta[i];
        // closed intersection: touching cells count (sound side)
        jmin[i] = std::max<std::int64_t>(
            static_cast<std::int64_t>(std::ceil(tlo - kSnapTol)) - 1, 0);
        jmax[i] = std::min<std::int64_t>(
            static_cast<std::int64_t>(std::floor(thi + kSnapTol)),
            cpa[i] - 1);
      }
      if (!blocked) {
        std::vector<std::int64_t> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = jmin[i];
        for (;;) {
          std::size_t flat = 0;
          for (int i = 0; i < n; ++i)
            flat = flat * static_cast<std::size_t>(cpa[i]) +
                   static_cast<std::size_t>(idx[i]);
          pair_succ.push_back(static_cast<std::uint32_t>(flat));
          int i = n - 1;
          while (i >= 0 && ++idx[i] > jmax[i]) idx[i--] = jmin[i];
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

SoundnessReport audit_fullstate_soundness(const Plant& plant,
                                          const SymbolicModel& model,
                                          std::size_t trials,
                                          std::uint64_t seed) {
  SoundnessReport rep;
  rep.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_u(0, model.num_inputs() - 1);
  const GridSpec& grid = model.grid;
  const int n = grid.dim();
  const int dof = plant.dof;
  const IntervalBox cov = grid.covered();
  const Vec d0 = Vec::Zero(dof);
  const int substeps = 64;
  const double dt = model.h / substeps;

  for (std::size_t k = 0; k < trials; ++k) {
    Vec y(n);
    for (int i = 0; i < n; ++i)
      y[i] = cov.lo()[i] + unit(rng) * (cov.hi()[i] - cov.lo()[i]);
    const std::size_t ui = pick_u(rng);
    const auto cell = grid.quantize_flat(y);
    if (!cell) continue;
    const auto post = model.post(*cell, ui);
    if (post.empty()) continue;
    ++rep.checked;
    Vec x = y.head(dof), v = y.tail(dof);
    const Vec& tau = model.inputs[ui];
    for (int s = 0; s < substeps; ++s) {
      const Vec k1v = plant.accel(x, v, tau, d0);
      const Vec x2 = x + 0.5 * dt * v, v2 = v + 0.5 * dt * k1v;
      const Vec k2v = plant.accel(x2, v2, tau, d0);
      const Vec x3 = x + 0.5 * dt * v2, v3 = v + 0.5 * dt * k2v;
      const Vec k3v = plant.accel(x3, v3, tau, d0);
      const Vec x4 = x + dt * v3, v4 = v + dt * k3v;
      const Vec k4v = plant.accel(x4, v4, tau, d0);
      const Vec xn = x + (dt / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
      v += (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      x = xn;
    }
    Vec end(n);
    end << x, v;
    const auto cn = grid.quantize_flat(end);
    const bool ok =
        cn && std::binary_search(post.begin(), post.end(),
                                 static_cast<std::uint32_t>(*cn));
    if (!ok) {
      rep.pass = false;
      ++rep.failures;
    }
  }
  return rep;
}

std::size_t transition_bytes(const SymbolicModel& model) {
  return model.succ.size() * sizeof(std::uint32_t) +
         model.offsets.size() * sizeof(std::uint64_t);
}

BenchmarkTable run_pendulum_comparison(const PendulumBenchConfig& cfg) {
  const Plant plant = make_pendulum(cfg.mass, cfg.length, cfg.gravity);
  BenchmarkTable table;

  // zone abstraction: 1-D grid over the angle only
  {
    BenchmarkRow row;
    row.label = "pendulum zone (1-D)";
    const GridSpec grid(cfg.angle_domain, Vec::Constant(1, cfg.eta_angle));
    const InputGrid inputs =
        InputGrid::extremes_and_zero(Vec::Constant(1, cfg.u_bar));
    auto t0 = std::chrono::steady_clock::now();
    const SymbolicModel model = build_model(grid, inputs, cfg.h);
    row.build_seconds = seconds_since(t0);

    RasSequence seq;
    seq.tasks.push_back({{cfg.goal}, {}, cfg.angle_domain, false});
    const Vec delta =
        Vec::Constant(1, cfg.u_bar * cfg.h / 2.0 + cfg.eta_angle);
    const TightenedSequence tight = tighten(seq, cfg.lambda, delta);
    const auto sets = abstract_sets(tight, grid);
    t0 = std::chrono::steady_clock::now();
    const TaskController tc =
        solve_reach_avoid(model, sets[0].goal, sets[0].unsafe, sets[0].stay);
    row.solve_seconds = seconds_since(t0);
    row.cells = grid.num_cells();
    row.transitions = model.num_transitions();
    row.bytes = transition_bytes(model);
    row.domain = tc.domain_size();
    table.rows.push_back(row);
  }

  // full-state comparator: 2-D grid over (angle, velocity)
  {
    BenchmarkRow row;
    row.label = "pendulum full-state (2-D)";
    Vec lo(2), hi(2), eta(2);
    lo << cfg.angle_domain.lo()[0], cfg.velocity_domain.lo()[0];
    hi << cfg.angle_domain.hi()[0], cfg.velocity_domain.hi()[0];
    eta << cfg.eta_angle, cfg.eta_velocity;
    const GridSpec grid(IntervalBox(lo, hi), eta);
    std::vector<int> ns = {cfg.torque_samples};
    const InputGrid torques(Vec::Constant(1, cfg.tau_bar), ns);
    const GrowthBound growth = pendulum_growth(cfg.length, cfg.gravity);
    auto t0 = std::chrono::steady_clock::now();
    const SymbolicModel model =
        build_fullstate_model(plant, grid, torques, cfg.h, growth);
    row.build_seconds = seconds_since(t0);

    std::vector<std::uint32_t> goal, unsafe, stay;
    for (std::size_t c = 0; c < grid.num_cells(); ++c) {
      stay.push_back(static_cast<std::uint32_t>(c));
      const IntervalBox box = grid.cell_box(c);
      if (box.lo()[0] >= cfg.goal.lo()[0] - kSnapTol &&
          box.hi()[0] <= cfg.goal.hi()[0] + kSnapTol)
        goal.push_back(static_cast<std::uint32_t>(c));
    }
    t0 = std::chrono::steady_clock::now();
    const TaskController tc = solve_reach_avoid(model, goal, unsafe, stay);
    row.solve_seconds = seconds_since(t0);
    row.cells = grid.num_cells();
    row.transitions = model.num_transitions();
    row.bytes = transition_bytes(model);
    row.domain = tc.domain_size();
    table.rows.push_back(row);
  }

  const auto& z = table.rows[0];
  const auto& f = table.rows[1];
  const double zt = z.build_seconds + z.solve_seconds;
  const double ft = f.build_seconds + f.solve_seconds;
  table.time_reduction_pct = ft > 0.0 ? 100.0 * (1.0 - zt / ft) : 0.0;
  table.memory_reduction_pct =
      f.bytes > 0 ? 100.0 * (1.0 - static_cast<double>(z.bytes) / f.bytes)
                  : 0.0;
  return table;
}

void append_arm_rows(BenchmarkTable& table, double eta, double h,
                     double u_bar) {
  BenchmarkRow row;
  row.label = "arm zone (2-D)";
  Vec lo(2), hi(2);
  lo << -1.0, -1.0;
  hi << 1.0, 1.0;
  const IntervalBox domain(lo, hi);
  const GridSpec grid(domain, Vec::Constant(2, eta));
  const InputGrid inputs =
      InputGrid::extremes_and_zero(Vec::Constant(2, u_bar));
  auto t0 = std::chrono::steady_clock::now();
  const SymbolicModel model = build_model(grid, inputs, h);
  row.build_seconds = seconds_since(t0);

  Vec glo(2), ghi(2);
  glo << 0.7, -0.8;
  ghi << 0.8, -0.7;
  RasSequence seq;
  seq.tasks.push_back({{IntervalBox(glo, ghi)}, {}, domain, false});
  const Vec delta = Vec::Constant(2, u_bar * h / 2.0 + eta);
  const TightenedSequence tight = tighten(seq, 0.019, delta);
  const auto sets = abstract_sets(tight, grid);
  t0 = std::chrono::steady_clock::now();
  const TaskController tc =
      solve_reach_avoid(model, sets[0].goal, sets[0].unsafe, sets[0].stay);
  row.solve_seconds = seconds_since(t0);
  row.cells = grid.num_cells();
  row.transitions = model.num_transitions();
  row.bytes = transition_bytes(model);
  row.domain = tc.domain_size();
  table.rows.push_back(row);

  BenchmarkRow absent;
  absent.label = "arm full-state (4-D)";
  absent.ran = false;
  table.rows.push_back(absent);
}

namespace {

void format_row(std::ostringstream& os, const BenchmarkRow& r, char sep,
                bool pad) {
  auto col = [&](const std::string& s) {
    os << sep << (pad ? " " : "") << s << (pad ? " " : "");
  };
  col(r.label);
  if (!r.ran) {
    for (int i = 0; i < 6; ++i) col("not run");
  } else {
    std::ostringstream b, s;
    b.precision(6);
    s.precision(6);
    b << std::fixed << r.build_seconds;
    s << std::fixed << r.solve_seconds;
    col(b.str());
    col(s.str());
    col(std::to_string(r.cells));
    col(std::to_string(r.transitions));
    col(std::to_string(r.bytes));
    col(std::to_string(r.domain));
  }
  if (pad) os << sep;
  os << "\n";
}

}  // namespace

std::string to_markdown(const BenchmarkTable& table) {
  std::ostringstream os;
  os << "| scenario | build [s] | solve [s] | cells | transitions | bytes | "
        "domain |\n";
  os << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : table.rows) format_row(os, r, '|', true);
  os.precision(2);
  os << "\ntime reduction: " << std::fixed << table.time_reduction_pct
     << "%  memory reduction: " << table.memory_reduction_pct << "%\n";
  return os.str();
}

std::string to_csv(const BenchmarkTable& table) {
  std::ostringstream os;
  os << "scenario,build_s,solve_s,cells,transitions,bytes,domain\n";
  for (const auto& r : table.rows) {
    std::ostringstream line;
    format_row(line, r, ',', false);
    os << line.str().substr(1);  // drop the leading separator
  }
  os.precision(4);
  os << "time_reduction_pct," << std::fixed << table.time_reduction_pct
     << "\nmemory_reduction_pct," << table.memory_reduction_pct << "\n";
  return os.str();
}

}  // namespace vcz
