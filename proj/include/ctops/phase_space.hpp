#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ctops/classical.hpp"
#include "ctops/entanglement.hpp"
#include "ctops/spin_algebra.hpp"

namespace ctops {

/// Point on the sphere: theta in [0, pi], phi in [0, 2 pi).
struct SphereAngle {
  double theta = 0.0;
  double phi = 0.0;
};

/// Throws DomainError when the angle is out of range.
void validate(const SphereAngle& angle);

struct CoherentAmplitudes {
  SpinJ j{1};
  Eigen::VectorXcd amps;  // amps[k] = <j, m = k - j | z(theta, phi)>
};

/// Spin coherent state (1+|z|^2)^(-j) exp(z J_+)|j,-j> with z = exp(-i phi) tan(theta/2),
/// expanded in closed form:
///   sqrt(C(2j, j+m)) cos(theta/2)^(j-m) sin(theta/2)^(j+m) exp(-i (j+m) phi).
/// Evaluated directly in the angles so theta = pi needs no special case.
/// The mean spin direction is (sin t cos p, sin t sin p, -cos t).
CoherentAmplitudes coherent_amps(SpinJ j, const SphereAngle& angle);

/// Angle of the coherent state whose mean spin direction is the unit vector l.
SphereAngle coherent_angle_of(const Vec3& l);

/// Two-body Husimi function |<z1, z2|psi>|^2.
double q_value(const QuantumState& state, const SphereAngle& a1, const SphereAngle& a2);

struct QGrid {
  std::vector<double> thetas;  // shared by both axes, uniform on [0, pi]
  double phi1 = 0.0;
  double phi2 = 0.0;
  Eigen::MatrixXd values;  // values(i, k) = Q(thetas[i], phi1; thetas[k], phi2)
};

/// Cross-section at fixed (phi1, phi2) on an n_theta x n_theta grid; n_theta >= 16.
QGrid q_cross_section(const QuantumState& state, double phi1, double phi2, int n_theta);

struct GridPeak {
  int i = 0;
  int k = 0;
  double value = 0.0;
};

/// Local maxima (8-neighbour, non-strict) holding at least min_fraction of the
/// global maximum, sorted by decreasing value.
std::vector<GridPeak> find_peaks(const QGrid& grid, double min_fraction = 0.5);

struct WehrlOptions {
  int n_theta = 128;
  int n_phi = 128;
  /// 1 selects the Wehrl entropy -int Q ln Q; other values give the Renyi-Wehrl
  /// entropy ln(int Q^order) / (1 - order).
  double order = 1.0;
  /// Allowed |int Q - 1| before the grid is declared too coarse.
  double normalization_tol = 1e-2;
};

struct WehrlResult {
  double nats = 0.0;
  double bits = 0.0;
  double normalization = 0.0;  // int Q dmu on the quadrature grid
};

/// Quadrature over both spheres with measure ((2j+1)/(4 pi))^2 sin t1 sin t2 dt1 dp1 dt2 dp2:
/// trapezoidal in theta, uniform in phi. Grid sizes must be >= 32.
/// Throws NormalizationError when the discrete normalization misses 1 by more than the tolerance.
WehrlResult wehrl_entropy(const QuantumState& state, const WehrlOptions& opts = {});

/// int Q dmu alone; same quadrature as wehrl_entropy.
double q_normalization(const QuantumState& state, int n_theta, int n_phi);

/// Product state |z1> (x) |z2>.
QuantumState coherent_product(SpinJ j, const SphereAngle& a1, const SphereAngle& a2);

}  // namespace ctops
