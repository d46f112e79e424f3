#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctops/eigensolver.hpp"
#include "ctops/spin_algebra.hpp"

namespace ctops {

/// Normalized pure state on the (2j+1)^2 product basis, index = m_index * (2j+1) + n_index.
class QuantumState {
 public:
  /// Throws DomainError on a length mismatch or a norm off by more than 1e-10.
  QuantumState(SpinJ j, Eigen::VectorXcd amplitudes);
  QuantumState(SpinJ j, const Eigen::VectorXd& amplitudes);

  /// Rescales to unit norm before validating.
  static QuantumState normalized(SpinJ j, Eigen::VectorXcd amplitudes);

  SpinJ spin() const noexcept { return j_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }

  /// Amplitudes as a (2j+1) x (2j+1) matrix C(a, b) with a the site-1 index.
  Eigen::MatrixXcd coefficient_matrix() const;

 private:
  SpinJ j_;
  Eigen::VectorXcd amps_;
};

struct ReducedDensityMatrix {
  Eigen::MatrixXcd entries;
  int subsystem = 1;
};

/// rho_1 = C C^dagger, rho_2 = C^T conj(C).
ReducedDensityMatrix reduce(const QuantumState& state, int subsystem);

/// Von Neumann entropy in bits; eigenvalues below 1e-14 are dropped.
/// Throws NormalizationError if the trace is off by more than 1e-8.
double entropy_bits(const ReducedDensityMatrix& rho);

/// Entropy of entanglement of a pure bipartite state.
double entanglement_entropy(const QuantumState& state);

/// Same quantity from the singular values of C; independent of the density-matrix route.
double entanglement_entropy_svd(const QuantumState& state);

struct SweepRow {
  double mu = 0.0;
  double entropy_bits = 0.0;
  double ground_energy = 0.0;
  double gap = 0.0;
  bool degenerate_flag = false;
  bool failed = false;
  std::string error;
};

struct SweepOptions {
  SolverOptions solver{};
  int threads = 1;
};

/// One row per coupling. Solver failures mark the row instead of aborting.
/// Throws DomainError if the grid is not sorted ascending.
std::vector<SweepRow> sweep(SpinJ j, const std::vector<double>& mu_grid,
                            const SweepOptions& opts = {});

struct PeakSearchOptions {
  double coarse_step = 0.01;
  double refine_tol = 1e-4;
  double window_lo = 0.5;
  double window_hi = 3.0;
  SweepOptions sweep{};
};

struct CriticalPointRecord {
  SpinJ j{1};
  bool has_peak = false;  // false: the coarse maximum sits on a window edge
  double mu_qc = 0.0;
  double s_max = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  double grid_step = 0.0;
};

/// Coupling of maximal ground-state entanglement: coarse scan of the window,
/// then golden-section refinement of the bracketing triple.
CriticalPointRecord find_mu_qc(SpinJ j, const PeakSearchOptions& opts = {});

/// Uniform grid lo, lo+step, ..., up to hi (inclusive within step/2).
std::vector<double> make_grid(double lo, double hi, double step);

}  // namespace ctops
