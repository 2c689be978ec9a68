#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vcz/confinement.hpp"
#include "vcz/geometry.hpp"

namespace vcz {

enum class DisturbanceKind { Zero, Sinusoidal, Uniform };

/// Deterministic disturbance source: a pure function of (seed, t). The
/// uniform kind hashes (seed, axis, quantized t) so replays are exact.
struct Disturbance {
  DisturbanceKind kind = DisturbanceKind::Zero;
  Vec amplitude;       // componentwise bound; |d_i(t)| <= amplitude_i
  Vec frequency;       // sinusoidal only [rad/s]
  Vec phase;           // sinusoidal only
  std::uint64_t seed = 0;

  Vec sample(double t) const;
};

/// Lagrangian plant: M(x) v' = tau - V(x,v) - G(x) + d.
/// accel returns v' for concrete torque tau and disturbance d.
struct Plant {
  std::string name;
  int dof = 0;
  std::function<Vec(const Vec& x, const Vec& v, const Vec& tau, const Vec& d)>
      accel;
  FeasibilityBounds bounds;  // declared envelope the controller relies on
};

/// Inverted pendulum (single link, torque at the pivot).
Plant make_pendulum(double mass, double length, double gravity);
/// Two-link planar arm, second motor at the elbow.
Plant make_scara(double mass, double length, double gravity);
/// k independent planar double integrators (unit mass), stacked.
Plant make_point_agents(int agents);

/// Lookup by scenario name ("pendulum", "scara2", "agents2x2d");
/// params are forwarded to the factory. Throws ParseError on unknown names.
Plant make_plant(const std::string& name, double mass, double length,
                 double gravity, int agents);

struct BoundsAudit {
  bool pass = true;
  std::vector<std::string> violations;  // human-readable, empty when pass
};

/// Monte-Carlo audit that the declared envelope dominates the dynamics over
/// a state box: checks the torque/disturbance scalings of M^{-1} (smallest
/// eigenvalue form) and the Coriolis+gravity magnitude bound.
BoundsAudit audit_bounds(const Plant& plant, const IntervalBox& positions,
                         const Vec& v_bar, std::size_t trials,
                         std::uint64_t seed = 1);

}  // namespace vcz
