#include "vcz/confinement.hpp"

#include <cmath>

namespace vcz {

double psi_scalar(double s, const PsiConfig& cfg) {
  if (cfg.variant == PsiConfig::Variant::Smooth) {
    const double t = std::tanh(cfg.sharpness * s);
    return t * t * t;
  }
  // exact saturation: linear ramp between the saturated plateaus
  if (s <= -1.0) return -1.0;
  if (s >= 1.0) return 1.0;
  return s;
}

Vec psi(const Vec& s, const PsiConfig& cfg) {
  Vec out(s.size());
  for (int i = 0; i < s.size(); ++i) out[i] = psi_scalar(s[i], cfg);
  return out;
}

void FunnelParams::validate() const {
  if (p_v.size() != q_v.size() || p_v.size() != mu_v.size())
    throw ContractViolation("FunnelParams: dimension mismatch");
  if ((q_v.array() <= 0.0).any() || (p_v.array() <= q_v.array()).any())
    throw ContractViolation("FunnelParams: need 0 < q_v < p_v componentwise");
  if ((mu_v.array() <= 0.0).any())
    throw ContractViolation("FunnelParams: mu_v must be positive");
}

Vec funnel(double t, const FunnelParams& fp) {
  if (t < 0.0) throw ContractViolation("funnel: t must be nonnegative");
  return ((-fp.mu_v * t).array().exp() * (fp.p_v - fp.q_v).array()).matrix() +
         fp.q_v;
}

Vec velocity_reference(const Vec& x, const Vec& xi, double lambda,
                       const Vec& v_bar, const PsiConfig& cfg) {
  if (lambda <= 0.0) throw ContractViolation("velocity_reference: lambda <= 0");
  const Vec diff = x - xi;
  const double dist = diff.norm();
  if (dist == 0.0) return Vec::Zero(x.size());
  const double e_x = dist / lambda;
  return (-psi_scalar(e_x, cfg)) * (v_bar.array() * (diff / dist).array()).matrix();
}

Vec torque(const Vec& x, const Vec& v, const Vec& xi, double t,
           const FunnelParams& fp, const PsiConfig& cfg, const Vec& tau_bar,
           const Vec& v_bar, double lambda) {
  const Vec e_v = v - velocity_reference(x, xi, lambda, v_bar, cfg);
  const Vec rho = funnel(t, fp);
  const Vec eps = (e_v.array() / rho.array()).matrix();
  return (-tau_bar.array() * psi(eps, cfg).array()).matrix();
}

double a_r_bound(const Vec& v_bar, const Vec& u_bar, double lambda) {
  if (lambda <= 0.0) throw ContractViolation("a_r_bound: lambda <= 0");
  double worst = 0.0;
  for (int i = 0; i < v_bar.size(); ++i)
    worst = std::max(worst, 2.25 * v_bar[i] * (v_bar[i] + u_bar[i]) / lambda);
  return worst;
}

FeasibilityReport check_feasibility(const FeasibilityBounds& bounds,
                                    const FunnelParams& fp,
                                    const VczParams& params) {
  fp.validate();
  FeasibilityReport rep;
  rep.velocity_slack = bounds.v_bar - params.u_bar;
  rep.a_r = a_r_bound(bounds.v_bar, params.u_bar, params.lambda);
  const Vec funnel_term =
      (fp.mu_v.array() * (fp.p_v - fp.q_v).array()).matrix();
  rep.torque_rhs =
      (1.0 / bounds.m_lower) *
      (bounds.v_m_max + bounds.m_i_lower * bounds.d_bar + funnel_term +
       Vec::Constant(bounds.v_m_max.size(), rep.a_r));
  rep.torque_slack = bounds.tau_bar - rep.torque_rhs;
  rep.pass = (rep.velocity_slack.array() >= 0.0).all() &&
             (rep.torque_slack.array() >= 0.0).all();
  return rep;
}

namespace {
// per-axis input budget numerator: m*tau - V_M - m_i*d - mu(p-q)
Vec torque_budget(const FeasibilityBounds& bounds, const FunnelParams& fp) {
  return bounds.m_lower * bounds.tau_bar - bounds.v_m_max -
         bounds.m_i_lower * bounds.d_bar -
         (fp.mu_v.array() * (fp.p_v - fp.q_v).array()).matrix();
}
}  // namespace

ParamChoice solve_most_efficient(const FeasibilityBounds& bounds,
                                 const FunnelParams& fp) {
  fp.validate();
  const Vec budget = torque_budget(bounds, fp);
  if ((budget.array() <= 0.0).any())
    throw InfeasibleTask("solve_most_efficient: torque budget insufficient");
  ParamChoice out;
  out.u_bar = bounds.v_bar;
  // worst axis governs the scalar lambda
  out.lambda = 0.0;
  for (int i = 0; i < budget.size(); ++i)
    out.lambda = std::max(out.lambda,
                          2.0 * 2.25 * bounds.v_bar[i] * bounds.v_bar[i] / budget[i]);
  return out;
}

LeastConservative solve_least_conservative(const FeasibilityBounds& bounds,
                                           const FunnelParams& fp) {
  fp.validate();
  const Vec budget = torque_budget(bounds, fp);
  if ((budget.array() <= 0.0).any())
    throw InfeasibleTask("solve_least_conservative: torque budget insufficient");
  LeastConservative out;
  out.lambda_min = 0.0;
  for (int i = 0; i < budget.size(); ++i)
    out.lambda_min = std::max(
        out.lambda_min, 2.25 * bounds.v_bar[i] * bounds.v_bar[i] / budget[i]);
  const Vec v_bar = bounds.v_bar;
  out.u_bar_max = [budget, v_bar](double lambda) {
    Vec u(v_bar.size());
    for (int i = 0; i < v_bar.size(); ++i)
      u[i] = std::min(v_bar[i],
                      lambda / (2.25 * v_bar[i]) * budget[i] - v_bar[i]);
    return u;
  };
  return out;
}

}  // namespace vcz
