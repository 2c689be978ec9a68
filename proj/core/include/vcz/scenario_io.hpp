#pragma once

#include <string>

#include "vcz/sim.hpp"
#include "vcz/synthesis.hpp"

namespace vcz {

/// Fully-resolved scenario: everything a command needs, after parsing,
/// defaulting, broadcasting, and "auto:" parameter resolution.
struct Scenario {
  std::string name;
  std::string plant_type;  // pendulum | scara2 | agents2x2d
  double mass = 1.0;
  double length = 1.0;
  double gravity = 9.81;
  int agents = 1;

  FeasibilityBounds bounds;  // plant defaults, then file overrides
  std::string vcz_mode;      // "explicit" | "most-efficient" | "least-conservative"
  double lambda = 0.0;
  Vec u_bar;

  IntervalBox domain;
  Vec eta;
  int input_samples = 3;  // per axis
  double h = 0.0;

  FunnelParams funnel;
  PsiConfig psi;
  Disturbance disturbance;
  std::uint64_t seed = 1;

  double dt = 0.0;
  double t_end = 0.0;
  Vec x0, v0;
  Vec xi0;  // empty: snap to the nearest winning cell center

  RasSequence sequence;
  double separation = 0.0;  // pairwise agent distance monitor; 0 disables

  Plant make_plant_instance() const;
  SimConfig sim_config() const;
};

/// Parses and validates a scenario file. Unknown keys anywhere in the
/// document are rejected; "auto:" zone parameters are resolved against the
/// declared bounds. Throws ParseError with a path-qualified message.
Scenario load_scenario(const std::string& path);

/// Controller artifact: model + per-task winning/value/policy tables in a
/// canonical form (sorted keys, shortest-round-trip floats) so identical
/// inputs produce identical bytes.
void save_controller(const std::string& path, const SymbolicModel& model,
                     const SymbolicController& ctrl);
void load_controller(const std::string& path, SymbolicModel& model,
                     SymbolicController& ctrl);

/// Model-only cache with the same canonical encoding.
void save_model(const std::string& path, const SymbolicModel& model);
bool load_cached_model(const std::string& path, SymbolicModel& model);

void write_trajectory_csv(const std::string& path,
                          const std::vector<SimRecord>& trace);
void write_sim_report_json(const std::string& path, const SimReport& report);
/// Three plot-data files (<stem>_position.csv, _velocity.csv, _torque.csv):
/// t against state + zone center, velocity + held input, applied torque.
void write_plot_data(const std::string& stem,
                     const std::vector<SimRecord>& trace);

std::string feasibility_report_json(const Scenario& sc);

}  // namespace vcz
