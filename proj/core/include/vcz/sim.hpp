#pragma once

#include <string>
#include <vector>

#include "vcz/confinement.hpp"
#include "vcz/plants.hpp"
#include "vcz/synthesis.hpp"

namespace vcz {

struct SimConfig {
  double dt = 0.0;     // integration step (divides h)
  double t_end = 0.0;  // simulated duration
  Vec x0, v0;
  /// Zone-center start; empty vector means "snap x0 to the nearest winning
  /// cell center of the first task".
  Vec xi0;
  Disturbance disturbance;
  PsiConfig psi;
  FunnelParams funnel;
  double lambda = 0.0;
  Vec tau_bar;  // stage-II saturation (actuator limit)
};

struct SimRecord {
  double t = 0.0;
  Vec x, v, xi, u, tau;
  int task = 0;
  bool conf = true;       // ||x - xi|| < lambda
  bool funnel_ok = true;  // |v - v_r| < rho_v componentwise
  bool torque_ok = true;  // |tau| < tau_bar componentwise
  bool spec_ok = true;    // xi in the radius-tightened stay, outside obstacles
};

struct SimReport {
  bool completed = false;          // reached t_end with every monitor green
  std::string breach_monitor;      // "", "confinement", "funnel", "torque", "vczspec"
  double breach_time = -1.0;
  int tasks_completed = 0;         // sub-tasks whose abstract goal was entered
  std::size_t steps = 0;
  SatisfactionReport satisfaction;  // against the original sequence
};

struct SimResult {
  std::vector<SimRecord> trace;
  SimReport report;
};

/// Closed-loop run: the zone center follows the symbolic policy with
/// zero-order-hold inputs at multiples of h and moves linearly in between;
/// the plant state integrates with classical RK4 under the two-stage
/// feedback evaluated continuously. Monitors are checked at every dt and
/// the run halts on the first breach.
SimResult run_closed_loop(const Plant& plant, const SymbolicModel& model,
                          const SymbolicController& ctrl,
                          const RasSequence& original, const SimConfig& cfg);

}  // namespace vcz
