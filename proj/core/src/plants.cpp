#include "vcz/plants.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace vcz {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Vec Disturbance::sample(double t) const {
  const int n = static_cast<int>(amplitude.size());
  Vec d = Vec::Zero(n);
  switch (kind) {
    case DisturbanceKind::Zero:
      break;
    case DisturbanceKind::Sinusoidal:
      for (int i = 0; i < n; ++i)
        d[i] = amplitude[i] * std::sin(frequency[i] * t + phase[i]);
      break;
    case DisturbanceKind::Uniform:
      for (int i = 0; i < n; ++i) {
        // pure hash of (seed, axis, t): identical replays bit-for-bit
        const std::uint64_t bits = std::bit_cast<std::uint64_t>(t);
        const std::uint64_t z =
            splitmix64(seed ^ splitmix64(bits ^ splitmix64(i + 1)));
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;  // [0,1)
        d[i] = amplitude[i] * (2.0 * u - 1.0);
      }
      break;
  }
  return d;
}

Plant make_pendulum(double mass, double length, double gravity) {
  if (mass <= 0.0 || length <= 0.0)
    throw ContractViolation("make_pendulum: mass and length must be positive");
  Plant p;
  p.name = "pendulum";
  p.dof = 1;
  const double inv_inertia = 3.0 / (mass * length * length);
  const double grav = 3.0 * gravity / (2.0 * length);
  p.accel = [inv_inertia, grav](const Vec& x, const Vec&, const Vec& tau,
                                const Vec& d) {
    Vec a(1);
    a[0] = inv_inertia * (tau[0] + d[0]) - grav * std::sin(x[0]);
    return a;
  };
  p.bounds.m_lower = inv_inertia;
  p.bounds.m_i_lower = inv_inertia;
  p.bounds.v_m_max = Vec::Constant(1, 1.0);
  p.bounds.d_bar = Vec::Constant(1, 0.5);
  p.bounds.v_bar = Vec::Constant(1, 0.1);
  p.bounds.tau_bar = Vec::Constant(1, 2.0);
  return p;
}

Plant make_scara(double mass, double length, double gravity) {
  if (mass <= 0.0 || length <= 0.0)
    throw ContractViolation("make_scara: mass and length must be positive");
  Plant p;
  p.name = "scara2";
  p.dof = 2;
  const double ml2 = mass * length * length;
  const double mgl = mass * gravity * length;
  p.accel = [ml2, mgl](const Vec& x, const Vec& v, const Vec& tau,
                       const Vec& d) {
    const double c1 = std::cos(x[0]);
    const double c2 = std::cos(x[1]);
    const double c12 = std::cos(x[0] + x[1]);
    const double s2 = std::sin(x[1]);
    Eigen::Matrix2d M;
    M << ml2 * (5.0 / 3.0 + c2), ml2 * (1.0 / 3.0 + c2 / 2.0),
        ml2 * (c2 / 2.0), ml2 / 3.0;
    Eigen::Vector2d V;
    V << ml2 * s2 * (-v[1] * v[1] / 2.0 - v[0] * v[1]),
        ml2 * s2 * (v[0] * v[0] / 2.0);
    Eigen::Vector2d G;
    G << mgl * (3.0 * c1 / 2.0 + c12 / 2.0), mgl * (c12 / 2.0);
    const Eigen::Vector2d rhs =
        Eigen::Vector2d(tau[0] + d[0], tau[1] + d[1]) - V - G;
    const Eigen::Vector2d a = M.partialPivLu().solve(rhs);
    return Vec(a);
  };
  p.bounds.m_lower = 1.5;
  p.bounds.m_i_lower = 1.6;
  p.bounds.v_m_max = Vec::Constant(2, 5.0);
  p.bounds.d_bar = Vec::Constant(2, 0.2);
  p.bounds.v_bar = Vec::Constant(2, 0.2);
  p.bounds.tau_bar = Vec::Constant(2, 10.0);
  return p;
}

Plant make_point_agents(int agents) {
  if (agents < 1) throw ContractViolation("make_point_agents: need >= 1 agent");
  Plant p;
  p.name = "agents2x2d";
  p.dof = 2 * agents;
  p.accel = [](const Vec&, const Vec&, const Vec& tau, const Vec& d) {
    return Vec(tau + d);
  };
  p.bounds.m_lower = 1.0;
  p.bounds.m_i_lower = 1.0;
  p.bounds.v_m_max = Vec::Zero(p.dof);
  p.bounds.d_bar = Vec::Constant(p.dof, 0.02);
  p.bounds.v_bar = Vec::Constant(p.dof, 0.2);
  p.bounds.tau_bar = Vec::Constant(p.dof, 0.2);
  return p;
}

Plant make_plant(const std::string& name, double mass, double length,
                 double gravity, int agents) {
  if (name == "pendulum") return make_pendulum(mass, length, gravity);
  if (name == "scara2") return make_scara(mass, length, gravity);
  if (name == "agents2x2d") return make_point_agents(agents);
  throw ParseError("make_plant: unknown plant '" + name + "'");
}

BoundsAudit audit_bounds(const Plant& plant, const IntervalBox& positions,
                         const Vec& v_bar, std::size_t trials,
                         std::uint64_t seed) {
  if (positions.dim() != plant.dof || v_bar.size() != plant.dof)
    throw ContractViolation("audit_bounds: dimension mismatch");
  BoundsAudit audit;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = plant.dof;
  const Vec zero = Vec::Zero(n);
  constexpr double tol = 1e-9;
  auto note = [&](std::string msg) {
    audit.pass = false;
    if (audit.violations.size() < 8) audit.violations.push_back(std::move(msg));
  };

  for (std::size_t k = 0; k < trials; ++k) {
    Vec x(n), v(n);
    for (int i = 0; i < n; ++i) {
      x[i] = positions.lo()[i] + unit(rng) * (positions.hi()[i] - positions.lo()[i]);
      v[i] = v_bar[i] * (2.0 * unit(rng) - 1.0);
    }
    // drift: Coriolis + gravity acceleration bound, componentwise
    const Vec drift = plant.accel(x, v, zero, zero);
    for (int i = 0; i < n; ++i)
      if (std::abs(drift[i]) > plant.bounds.v_m_max[i] + tol)
        note("|drift accel| " + std::to_string(std::abs(drift[i])) +
             " exceeds v_m_max on axis " + std::to_string(i));
    // torque-to-acceleration gain matrix A = d(accel)/d(tau)
    Eigen::MatrixXd A(n, n);
    for (int j = 0; j < n; ++j) {
      Vec ej = Vec::Zero(n);
      ej[j] = 1.0;
      A.col(j) = plant.accel(x, v, ej, zero) - drift;
    }
    const Eigen::MatrixXd sym = 0.5 * (A + A.transpose());
    const double lmin =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().minCoeff();
    if (lmin < plant.bounds.m_lower - tol)
      note("torque gain " + std::to_string(lmin) + " below m_lower at x=(" +
           std::to_string(x[0]) + ",..)");
    const double gain_inf = A.cwiseAbs().rowwise().sum().maxCoeff();
    if (gain_inf > plant.bounds.m_i_lower + tol)
      note("disturbance gain " + std::to_string(gain_inf) +
           " exceeds m_i_lower at x=(" + std::to_string(x[0]) + ",..)");
  }
  return audit;
}

}  // namespace vcz
