#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace ctops {

using Vec3 = std::array<double, 3>;

/// Pair of unit angular-momentum vectors L_i = <J_i>/j.
struct ClassicalState {
  Vec3 l1{};
  Vec3 l2{};
};

/// Canonical chart: z_i = cos(theta_i) is conjugate to the azimuth phi_i.
struct CanonicalState {
  double phi1 = 0.0;
  double z1 = 0.0;
  double phi2 = 0.0;
  double z2 = 0.0;
};

CanonicalState to_canonical(const ClassicalState& s);
ClassicalState from_canonical(const CanonicalState& c);

enum class Branch { RightRight, LeftLeft, RightLeft, LeftRight, A, B, C, D };
enum class Stability { Elliptic, Hyperbolic, Marginal };

/// Arrow labels for the axial points, letters for the emergent ones.
std::string to_string(Branch b);
std::string to_string(Stability s);

struct FixedPointRecord {
  ClassicalState coords;
  Branch branch = Branch::RightRight;
  Stability stability = Stability::Marginal;
  std::array<std::complex<double>, 4> jacobian_eigenvalues{};
};

/// Largest deviation of |L_i| from 1.
double constraint_violation(const ClassicalState& s);

/// E = L_x1 + L_x2 + mu L_z1 L_z2. Throws DomainError if |L_i| misses 1 by more than 1e-6.
double classical_energy(const ClassicalState& s, double mu);

/// dL_i/dt = L_i x B_i with B_1 = (1, 0, mu L_z2) and B_2 = (1, 0, mu L_z1).
ClassicalState equations_of_motion(const ClassicalState& s, double mu);

/// Canonical-chart flow: dphi_i/dt = -dE/dz_i, dz_i/dt = dE/dphi_i, ordered (phi1, z1, phi2, z2).
std::array<double, 4> canonical_flow(const CanonicalState& c, double mu);

/// Analytic 4x4 Jacobian of canonical_flow, row-major.
std::array<double, 16> canonical_jacobian(const CanonicalState& c, double mu);

/// Linearize at an equilibrium and classify. Throws DomainError if the flow there
/// exceeds 1e-10 or the point sits on the chart singularity |z| = 1.
FixedPointRecord linearize_and_classify(const ClassicalState& fp, double mu, Branch branch);

/// Axial points always; the emergent A, B, C, D for mu > 1.
std::vector<FixedPointRecord> enumerate_fixed_points(double mu);

struct BifurcationRow {
  double mu = 0.0;
  Branch branch = Branch::RightRight;
  double lz1 = 0.0;
  double lx1 = 0.0;
  Stability stability = Stability::Marginal;
};

/// Every fixed point at n uniformly spaced couplings on [mu_lo, mu_hi].
std::vector<BifurcationRow> bifurcation_diagram(double mu_lo, double mu_hi, int n);

struct Trajectory {
  std::vector<ClassicalState> states;  // states[0] is the initial condition
  double max_energy_drift = 0.0;
  double max_constraint_drift = 0.0;  // before per-step renormalization
};

/// Classic RK4 on the cross-product flow, renormalizing each L_i after every step.
Trajectory integrate(const ClassicalState& s0, double mu, double dt, int steps);

}  // namespace ctops
