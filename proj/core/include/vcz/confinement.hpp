#pragma once

#include <functional>

#include "vcz/geometry.hpp"

namespace vcz {

/// Odd nondecreasing saturation shape used at both control stages.
struct PsiConfig {
  enum class Variant { Smooth, Exact };
  Variant variant = Variant::Smooth;
  double sharpness = 1.8;  // smooth variant: psi(s) = tanh^3(a*s)
};

double psi_scalar(double s, const PsiConfig& cfg);
Vec psi(const Vec& s, const PsiConfig& cfg);

/// Exponentially decaying velocity-error funnel.
struct FunnelParams {
  Vec p_v;   // initial width
  Vec q_v;   // steady-state width
  Vec mu_v;  // diagonal decay rates [1/s]

  void validate() const;
};

/// rho_v(t) = exp(-mu*t)*(p-q) + q, componentwise.
Vec funnel(double t, const FunnelParams& fp);

/// Declared plant parameter bounds (the controller sees only these).
struct FeasibilityBounds {
  double m_lower = 0.0;    // torque scaling of M^{-1}
  double m_i_lower = 0.0;  // disturbance scaling of M^{-1}
  Vec v_m_max;             // Coriolis + gravity bound
  Vec d_bar;               // disturbance bound
  Vec v_bar;               // velocity limit
  Vec tau_bar;             // torque limit
};

struct VczParams {
  double lambda = 0.0;  // confinement radius
  Vec u_bar;            // center velocity bound
  double h = 0.0;       // symbolic sampling period
  Vec eta;              // quantization parameter
};

/// Stage-I velocity reference pulling x toward the zone center; returns
/// zero at x == xi (continuous extension).
Vec velocity_reference(const Vec& x, const Vec& xi, double lambda,
                       const Vec& v_bar, const PsiConfig& cfg);

/// Stage-II saturated torque: tau = -tau_bar .* psi(e_v ./ rho_v(t)).
/// t is the funnel clock (time since the active sub-task engaged).
Vec torque(const Vec& x, const Vec& v, const Vec& xi, double t,
           const FunnelParams& fp, const PsiConfig& cfg, const Vec& tau_bar,
           const Vec& v_bar, double lambda);

/// Uniform bound on |dv_r/dt| for the smooth variant at a = 1.8:
/// 2.25 * v_bar * (v_bar + u_bar) / lambda, worst axis.
double a_r_bound(const Vec& v_bar, const Vec& u_bar, double lambda);

struct FeasibilityReport {
  bool pass = true;
  Vec velocity_slack;  // v_bar - u_bar
  Vec torque_rhs;      // (1/m)(V_M + m_i d + mu(p-q) + a_r)
  Vec torque_slack;    // tau_bar - torque_rhs
  double a_r = 0.0;
};

FeasibilityReport check_feasibility(const FeasibilityBounds& bounds,
                                    const FunnelParams& fp,
                                    const VczParams& params);

struct ParamChoice {
  double lambda = 0.0;
  Vec u_bar;
};

/// Strategy B: u_bar = v_bar, lambda sized so the torque condition holds
/// with equality on the worst axis.
ParamChoice solve_most_efficient(const FeasibilityBounds& bounds,
                                 const FunnelParams& fp);

struct LeastConservative {
  double lambda_min = 0.0;
  /// Largest admissible u_bar for a given lambda (componentwise).
  std::function<Vec(double)> u_bar_max;
};

/// Strategy A: smallest lambda with a positive input budget, and the map
/// lambda -> u_bar_max(lambda).
LeastConservative solve_least_conservative(const FeasibilityBounds& bounds,
                                           const FunnelParams& fp);

}  // namespace vcz
