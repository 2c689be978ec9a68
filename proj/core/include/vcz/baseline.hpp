#pragma once

#include <string>
#include <vector>

#include "vcz/plants.hpp"
#include "vcz/synthesis.hpp"

namespace vcz {

/// Per-axis expansion rate for interval over-approximation of the flow:
/// an elementwise bound on |df/dx| over the domain. A cell of half-width
/// r0 grows to expm(rate*h)*r0 over one sampling period.
struct GrowthBound {
  Eigen::MatrixXd rate;

  Vec radius(const Vec& r0, double h) const;
};

/// Growth bound for the known pendulum dynamics (|d a/d x| <= 3g/(2l)).
GrowthBound pendulum_growth(double length, double gravity);

/// Full-state (position, velocity) abstraction of a known plant: successors
/// are the cells intersecting the RK4-propagated cell center inflated by
/// the growth-bound radius. Same container type as the model-free
/// abstraction so the game solvers apply unchanged. Disturbance-free.
SymbolicModel build_fullstate_model(const Plant& plant, const GridSpec& grid,
                                    const InputGrid& torques, double h,
                                    const GrowthBound& growth,
                                    int substeps = 8);

struct SoundnessReport {
  bool pass = true;
  std::size_t trials = 0;
  std::size_t checked = 0;
  std::size_t failures = 0;
};

/// Samples random (state, torque) pairs, integrates the true dynamics over
/// one period, and verifies the end cell lies in the abstract Post.
SoundnessReport audit_fullstate_soundness(const Plant& plant,
                                          const SymbolicModel& model,
                                          std::size_t trials,
                                          std::uint64_t seed = 1);

/// Transition-table footprint: successor records plus the CSR offsets.
std::size_t transition_bytes(const SymbolicModel& model);

struct BenchmarkRow {
  std::string label;
  bool ran = true;  // false rows render as "not run"
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  std::size_t cells = 0;
  std::size_t transitions = 0;
  std::size_t bytes = 0;
  std::size_t domain = 0;  // winning cells
};

struct BenchmarkTable {
  std::vector<BenchmarkRow> rows;
  /// Reductions of row 0 (zone abstraction) relative to row 1 (full-state).
  double time_reduction_pct = 0.0;
  double memory_reduction_pct = 0.0;
};

struct PendulumBenchConfig {
  double mass = 1.0 / 9.0;
  double length = 3.0;
  double gravity = 9.81;
  IntervalBox angle_domain;     // e.g. [-0.2, 0.2]
  IntervalBox velocity_domain;  // e.g. [-0.1, 0.1]
  IntervalBox goal;             // angle interval to reach
  double eta_angle = 0.0;
  double eta_velocity = 0.0;
  double h = 0.0;
  double u_bar = 0.0;          // zone-center speed limit
  double tau_bar = 2.0;
  int torque_samples = 11;
  double lambda = 0.018;
};

/// Builds and solves the same pendulum reach task twice — once with the
/// 1-D zone abstraction, once with the 2-D full-state abstraction — and
/// reports Table-style timings, sizes, and percent reductions.
BenchmarkTable run_pendulum_comparison(const PendulumBenchConfig& cfg);

/// Appends a third row for the 2-D arm zone abstraction (full-state arm
/// comparator intentionally absent: marked "not run").
void append_arm_rows(BenchmarkTable& table, double eta, double h,
                     double u_bar);

std::string to_markdown(const BenchmarkTable& table);
std::string to_csv(const BenchmarkTable& table);

}  // namespace vcz
