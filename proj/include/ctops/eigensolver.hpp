#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ctops/hamiltonian.hpp"

namespace ctops {

struct SolverOptions {
  /// Required residual ||H v - lambda v||_2 for every returned pair.
  double tol = 1e-11;
  /// Krylov dimension cap; the effective cap is min(max_iterations, dim).
  int max_iterations = 2000;
  /// Ground levels closer than this are reported as quasi-degenerate.
  double degeneracy_threshold = 1e-10;
};

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;     // one column per eigenvalue; empty if not requested
  double residual_norm = 0.0;       // largest residual over the returned pairs
  double gap = 0.0;                 // E1 - E0 for ground-state solves
  int iterations = 0;
  bool quasi_degenerate = false;
};

/// Lowest `count` eigenpairs by Lanczos with full reorthogonalization on the
/// matrix-free apply. `start` defaults to the sign-staggered vector
/// (-1)^(a+b), which overlaps the ground state for every coupling.
///
/// Throws ConvergenceError when the residual target is missed at the Krylov cap.
EigenResult lowest_eigenpairs(const Hamiltonian& h, int count, const SolverOptions& opts = {},
                              std::optional<Eigen::VectorXd> start = std::nullopt);

/// Ground state and the gap to the nearest level.
///
/// The ground state lies in the sector even under both SWAP and the site-wise
/// reflection m -> -m. The gap is taken against the next Lanczos level in that
/// sector and the lowest level of the sector holding the cat-state partner, so
/// the exponentially small doublet splitting at large |mu| is detected and
/// flagged rather than resolved. The returned vector is the symmetric member.
EigenResult ground_state(const Hamiltonian& h, const SolverOptions& opts = {});

/// Deterministic start vectors for the symmetry sectors used by ground_state.
Eigen::VectorXd staggered_start(SpinJ j);
Eigen::VectorXd partner_start(SpinJ j, double mu);

/// All eigenvalues (and optionally eigenvectors) of a dense real-symmetric matrix.
EigenResult full_spectrum(const Eigen::MatrixXd& dense, bool with_vectors = false);
EigenResult full_spectrum(const Hamiltonian& h, bool with_vectors = false);

/// Cyclic Jacobi rotations; slow reference solver for dim <= 512.
EigenResult jacobi_oracle(const Eigen::MatrixXd& dense);

inline constexpr int kJacobiDimCap = 512;

}  // namespace ctops
