#include "ctops/classical.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ctops/errors.hpp"

namespace ctops {

namespace {

constexpr double kConstraintTol = 1e-6;
constexpr double kEquilibriumTol = 1e-10;
constexpr double kClassifyTol = 1e-8;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

void require_constraint(const ClassicalState& s) {
  if (constraint_violation(s) > kConstraintTol) {
    throw DomainError("state violates the unit-sphere constraint by " +
                      std::to_string(constraint_violation(s)));
  }
}

using Flat = std::array<double, 6>;

Flat flatten(const ClassicalState& s) {
  return {s.l1[0], s.l1[1], s.l1[2], s.l2[0], s.l2[1], s.l2[2]};
}

ClassicalState unflatten(const Flat& f) { return {{f[0], f[1], f[2]}, {f[3], f[4], f[5]}}; }

Flat axpy(const Flat& x, double a, const Flat& y) {
  Flat out;
  for (std::size_t i = 0; i < 6; ++i) out[i] = x[i] + a * y[i];
  return out;
}

Flat flow(const Flat& x, double mu) { return flatten(equations_of_motion(unflatten(x), mu)); }

double flow_magnitude(const ClassicalState& s, double mu) {
  const ClassicalState d = equations_of_motion(s, mu);
  return std::hypot(norm(d.l1), norm(d.l2));
}

}  // namespace

CanonicalState to_canonical(const ClassicalState& s) {
  return {std::atan2(s.l1[1], s.l1[0]), s.l1[2], std::atan2(s.l2[1], s.l2[0]), s.l2[2]};
}

ClassicalState from_canonical(const CanonicalState& c) {
  const double r1 = std::sqrt(std::max(0.0, 1.0 - c.z1 * c.z1));
  const double r2 = std::sqrt(std::max(0.0, 1.0 - c.z2 * c.z2));
  return {{r1 * std::cos(c.phi1), r1 * std::sin(c.phi1), c.z1},
          {r2 * std::cos(c.phi2), r2 * std::sin(c.phi2), c.z2}};
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::RightRight: return "→→";
    case Branch::LeftLeft: return "←←";
    case Branch::RightLeft: return "→←";
    case Branch::LeftRight: return "←→";
    case Branch::A: return "A";
    case Branch::B: return "B";
    case Branch::C: return "C";
    case Branch::D: return "D";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Elliptic: return "elliptic";
    case Stability::Hyperbolic: return "hyperbolic";
    case Stability::Marginal: return "marginal";
  }
  return "?";
}

double constraint_violation(const ClassicalState& s) {
  return std::max(std::abs(norm(s.l1) - 1.0), std::abs(norm(s.l2) - 1.0));
}

double classical_energy(const ClassicalState& s, double mu) {
  require_constraint(s);
  return s.l1[0] + s.l2[0] + mu * s.l1[2] * s.l2[2];
}

ClassicalState equations_of_motion(const ClassicalState& s, double mu) {
  const Vec3 b1{1.0, 0.0, mu * s.l2[2]};
  const Vec3 b2{1.0, 0.0, mu * s.l1[2]};
  return {cross(s.l1, b1), cross(s.l2, b2)};
}

std::array<double, 4> canonical_flow(const CanonicalState& c, double mu) {
  const double r1 = std::sqrt(1.0 - c.z1 * c.z1);
  const double r2 = std::sqrt(1.0 - c.z2 * c.z2);
  const double de_dphi1 = -r1 * std::sin(c.phi1);
  const double de_dphi2 = -r2 * std::sin(c.phi2);
  const double de_dz1 = -c.z1 / r1 * std::cos(c.phi1) + mu * c.z2;
  const double de_dz2 = -c.z2 / r2 * std::cos(c.phi2) + mu * c.z1;
  return {-de_dz1, de_dphi1, -de_dz2, de_dphi2};
}

std::array<double, 16> canonical_jacobian(const CanonicalState& c, double mu) {
  const double r1 = std::sqrt(1.0 - c.z1 * c.z1);
  const double r2 = std::sqrt(1.0 - c.z2 * c.z2);
  const double s1 = std::sin(c.phi1), c1 = std::cos(c.phi1);
  const double s2 = std::sin(c.phi2), c2 = std::cos(c.phi2);
  // Second derivatives of E in (phi_i, z_i).
  const double pp1 = -r1 * c1, pz1 = c.z1 / r1 * s1, zz1 = -c1 / (r1 * r1 * r1);
  const double pp2 = -r2 * c2, pz2 = c.z2 / r2 * s2, zz2 = -c2 / (r2 * r2 * r2);
  // clang-format off
  return {
      -pz1, -zz1,  0.0,  -mu,
       pp1,  pz1,  0.0,  0.0,
       0.0,  -mu, -pz2, -zz2,
       0.0,  0.0,  pp2,  pz2,
  };
  // clang-format on
}

FixedPointRecord linearize_and_classify(const ClassicalState& fp, double mu, Branch branch) {
  require_constraint(fp);
  const double f = flow_magnitude(fp, mu);
  if (f > kEquilibriumTol) {
    throw DomainError("not an equilibrium: flow magnitude " + std::to_string(f));
  }
  const CanonicalState c = to_canonical(fp);
  if (std::abs(c.z1) >= 1.0 - 1e-12 || std::abs(c.z2) >= 1.0 - 1e-12) {
    throw DomainError("fixed point lies on the canonical chart singularity |z| = 1");
  }
  const auto jac = canonical_jacobian(c, mu);
  const Eigen::Matrix4d m = Eigen::Map<const Eigen::Matrix<double, 4, 4, Eigen::RowMajor>>(jac.data());
  Eigen::EigenSolver<Eigen::Matrix4d> es(m, false);

  FixedPointRecord rec;
  rec.coords = fp;
  rec.branch = branch;
  bool all_imaginary = true;
  bool any_growing = false;
  bool any_zero = false;
  for (int i = 0; i < 4; ++i) {
    const std::complex<double> ev = es.eigenvalues()[i];
    rec.jacobian_eigenvalues[static_cast<std::size_t>(i)] = ev;
    all_imaginary = all_imaginary && std::abs(ev.real()) < kClassifyTol;
    any_growing = any_growing || ev.real() > kClassifyTol;
    any_zero = any_zero || std::abs(ev) < kClassifyTol;
  }
  if (any_growing) {
    rec.stability = Stability::Hyperbolic;
  } else if (all_imaginary && !any_zero) {
    rec.stability = Stability::Elliptic;
  } else {
    rec.stability = Stability::Marginal;
  }
  return rec;
}

std::vector<FixedPointRecord> enumerate_fixed_points(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw DomainError("enumerate_fixed_points needs finite mu >= 0");
  const Vec3 right{1.0, 0.0, 0.0};
  const Vec3 left{-1.0, 0.0, 0.0};
  std::vector<FixedPointRecord> out;
  out.push_back(linearize_and_classify({right, right}, mu, Branch::RightRight));
  out.push_back(linearize_and_classify({left, left}, mu, Branch::LeftLeft));
  out.push_back(linearize_and_classify({right, left}, mu, Branch::RightLeft));
  out.push_back(linearize_and_classify({left, right}, mu, Branch::LeftRight));
  if (mu > 1.0) {
    const double lx = 1.0 / mu;
    const double lz = std::sqrt(1.0 - 1.0 / (mu * mu));
    out.push_back(linearize_and_classify({{lx, 0.0, lz}, {lx, 0.0, lz}}, mu, Branch::A));
    out.push_back(linearize_and_classify({{lx, 0.0, -lz}, {lx, 0.0, -lz}}, mu, Branch::B));
    out.push_back(linearize_and_classify({{-lx, 0.0, lz}, {-lx, 0.0, -lz}}, mu, Branch::C));
    out.push_back(linearize_and_classify({{-lx, 0.0, -lz}, {-lx, 0.0, lz}}, mu, Branch::D));
  }
  return out;
}

std::vector<BifurcationRow> bifurcation_diagram(double mu_lo, double mu_hi, int n) {
  if (!(mu_lo < mu_hi) || n < 2) throw DomainError("bifurcation_diagram needs mu_lo < mu_hi and n >= 2");
  std::vector<BifurcationRow> rows;
  for (int i = 0; i < n; ++i) {
    const double mu = (i == n - 1) ? mu_hi : mu_lo + (mu_hi - mu_lo) * i / (n - 1);
    for (const auto& fp : enumerate_fixed_points(mu)) {
      rows.push_back({mu, fp.branch, fp.coords.l1[2], fp.coords.l1[0], fp.stability});
    }
  }
  return rows;
}

Trajectory integrate(const ClassicalState& s0, double mu, double dt, int steps) {
  require_constraint(s0);
  if (!std::isfinite(dt) || steps < 0 || !std::isfinite(dt * steps)) {
    throw DomainError("integrate needs finite dt and steps >= 0");
  }
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.push_back(s0);
  const double e0 = classical_energy(s0, mu);
  Flat x = flatten(s0);
  for (int step = 0; step < steps; ++step) {
    const Flat k1 = flow(x, mu);
    const Flat k2 = flow(axpy(x, 0.5 * dt, k1), mu);
    const Flat k3 = flow(axpy(x, 0.5 * dt, k2), mu);
    const Flat k4 = flow(axpy(x, dt, k3), mu);
    for (std::size_t i = 0; i < 6; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    ClassicalState s = unflatten(x);
    traj.max_constraint_drift = std::max(traj.max_constraint_drift, constraint_violation(s));
    const double n1 = norm(s.l1);
    const double n2 = norm(s.l2);
    for (auto& v : s.l1) v /= n1;
    for (auto& v : s.l2) v /= n2;
    x = flatten(s);
    traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(classical_energy(s, mu) - e0));
    traj.states.push_back(s);
  }
  return traj;
}

}  // namespace ctops
