#include "vcz/sim.hpp"

#include <cmath>
#include <limits>

namespace vcz {

namespace {

bool inside_spec(const Vec& p, const RasTask& task) {
  if (!task.stay.contains(p)) return false;
  for (const auto& o : task.obstacles)
    if (o.contains(p)) return false;
  return true;
}

}  // namespace

SimResult run_closed_loop(const Plant& plant, const SymbolicModel& model,
                          const SymbolicController& ctrl,
                          const RasSequence& original, const SimConfig& cfg) {
  const int n = plant.dof;
  if (cfg.x0.size() != n || cfg.v0.size() != n)
    throw ContractViolation("run_closed_loop: initial state dimension mismatch");
  if (model.grid.dim() != n)
    throw ContractViolation("run_closed_loop: grid dimension mismatch");
  if (cfg.dt <= 0.0 || cfg.t_end <= 0.0)
    throw ContractViolation("run_closed_loop: dt and t_end must be positive");
  if (ctrl.tasks.empty() || ctrl.tasks.size() != original.tasks.size())
    throw ContractViolation("run_closed_loop: controller/sequence mismatch");
  cfg.funnel.validate();
  const auto steps_per_h =
      static_cast<std::size_t>(std::llround(model.h / cfg.dt));
  if (steps_per_h < 10 || std::abs(steps_per_h * cfg.dt - model.h) > 1e-9)
    throw ContractViolation("run_closed_loop: dt must divide h with h/dt >= 10");

  // zone-radius-tightened sets: the center monitor checks against these
  const TightenedSequence center_spec =
      tighten(original, cfg.lambda, Vec::Zero(n));

  // zone-center start: given, or nearest winning cell center of task 0
  Vec xi;
  if (cfg.xi0.size() == n) {
    xi = cfg.xi0;
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.grid.num_cells(); ++c) {
      if (!ctrl.tasks.front().wins(c)) continue;
      const Vec center = model.grid.cell_center(c);
      const double d = (center - cfg.x0).norm();
      if (d < best) {
        best = d;
        xi = center;
      }
    }
    if (xi.size() != n)
      throw OutsideDomain("run_closed_loop: first task has no winning cell", -1);
  }

  std::vector<std::vector<std::uint8_t>> goal_mask(ctrl.tasks.size());
  for (std::size_t i = 0; i < ctrl.tasks.size(); ++i) {
    goal_mask[i].assign(model.grid.num_cells(), 0);
    for (auto g : ctrl.tasks[i].goal_cells) goal_mask[i][g] = 1;
  }

  SimResult res;
  const auto nsteps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  res.trace.reserve(nsteps + 1);

  int task = 0;
  double task_clock_start = 0.0;  // funnel clock origin (absolute time)
  Vec u = Vec::Zero(n);
  Vec xi_sample = xi;
  double t_sample = 0.0;

  auto xi_at = [&](double t) { return Vec(xi_sample + (t - t_sample) * u); };
  auto tau_at = [&](const Vec& x, const Vec& v, double t) {
    return torque(x, v, xi_at(t), t - task_clock_start, cfg.funnel, cfg.psi,
                  cfg.tau_bar, plant.bounds.v_bar, cfg.lambda);
  };
  auto deriv = [&](const Vec& x, const Vec& v, double t, Vec& dx, Vec& dv) {
    dx = v;
    dv = plant.accel(x, v, tau_at(x, v, t), cfg.disturbance.sample(t));
  };

  Vec x = cfg.x0;
  Vec v = cfg.v0;
  std::vector<Vec> positions;
  std::vector<int> active_log;

  for (std::size_t k = 0; k <= nsteps; ++k) {
    const double t = k * cfg.dt;
    if (k % steps_per_h == 0) {
      // sample instant: advance the task when the center reached its goal,
      // then pick the zero-order-hold input for the next period
      xi_sample = xi_at(t);
      t_sample = t;
      auto cell = model.grid.quantize_flat(xi_sample);
      if (!cell)
        throw OutsideDomain("run_closed_loop: zone center left the grid", -1);
      while (goal_mask[task][*cell]) {
        if (res.report.tasks_completed < task + 1)
          res.report.tasks_completed = task + 1;
        if (task + 1 >= static_cast<int>(ctrl.tasks.size())) break;
        ++task;
        task_clock_start = t;  // funnel re-engages for the new sub-task
      }
      const ConcretePolicy policy(model, ctrl.tasks[task]);
      u = model.inputs[policy.select_index_at(*cell)];
    }

    SimRecord rec;
    rec.t = t;
    rec.x = x;
    rec.v = v;
    rec.xi = xi_at(t);
    rec.u = u;
    rec.tau = tau_at(x, v, t);
    rec.task = task;
    rec.conf = (x - rec.xi).norm() < cfg.lambda;
    const Vec e_v =
        v - velocity_reference(x, rec.xi, cfg.lambda, plant.bounds.v_bar, cfg.psi);
    const Vec rho = funnel(t - task_clock_start, cfg.funnel);
    rec.funnel_ok = (e_v.cwiseAbs().array() < rho.array()).all();
    rec.torque_ok = (rec.tau.cwiseAbs().array() < cfg.tau_bar.array()).all();
    rec.spec_ok = inside_spec(rec.xi, center_spec.tasks[task]);
    res.trace.push_back(rec);
    positions.push_back(x);
    active_log.push_back(task);
    ++res.report.steps;

    if (!rec.conf || !rec.funnel_ok || !rec.torque_ok || !rec.spec_ok) {
      res.report.breach_monitor = !rec.conf      ? "confinement"
                                  : !rec.funnel_ok ? "funnel"
                                  : !rec.torque_ok ? "torque"
                                                   : "vczspec";
      res.report.breach_time = t;
      break;
    }
    if (k == nsteps) break;

    // classical RK4 on (x, v) with continuous feedback
    Vec k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    deriv(x, v, t, k1x, k1v);
    deriv(x + 0.5 * cfg.dt * k1x, v + 0.5 * cfg.dt * k1v, t + 0.5 * cfg.dt,
          k2x, k2v);
    deriv(x + 0.5 * cfg.dt * k2x, v + 0.5 * cfg.dt * k2v, t + 0.5 * cfg.dt,
          k3x, k3v);
    deriv(x + cfg.dt * k3x, v + cfg.dt * k3v, t + cfg.dt, k4x, k4v);
    x += (cfg.dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += (cfg.dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }

  res.report.completed = res.report.breach_monitor.empty();
  res.report.satisfaction =
      check_task_satisfaction(positions, active_log, original);
  return res;
}

}  // namespace vcz
