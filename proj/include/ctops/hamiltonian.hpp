#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "ctops/spin_algebra.hpp"

namespace ctops {

struct ModelParams {
  SpinJ j{1};
  double mu = 0.0;

  /// Negative couplings are accepted for exploration but lie outside the studied regime.
  bool outside_studied_regime() const noexcept { return mu < 0.0; }
};

/// Throws DomainError for twice_j < 1 or non-finite mu.
void validate(const ModelParams& params);

/// H = J_x (x) I + I (x) J_x + (mu/j) J_z (x) J_z on the (2j+1)^2 product basis.
///
/// Holds the single-site band of J_x and the J_z diagonal so that H can be
/// applied without forming the dense matrix. The dense form is built on request
/// and only up to kDenseDimCap.
class Hamiltonian {
 public:
  explicit Hamiltonian(ModelParams params);

  const ModelParams& params() const noexcept { return params_; }
  SpinJ spin() const noexcept { return params_.j; }
  int site_dim() const noexcept { return params_.j.dim(); }
  int dim() const noexcept { return site_dim() * site_dim(); }

  /// out = H * in. Both spans must have length dim().
  void apply(std::span<const double> in, std::span<double> out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  /// Diagonal of the coupling term, (mu/j) m n at index m*d + n.
  const Eigen::VectorXd& coupling_diagonal() const noexcept { return coupling_; }
  const Eigen::VectorXd& jx_band() const noexcept { return band_; }

  /// Dense real-symmetric matrix. Throws DimensionError above kDenseDimCap.
  Eigen::MatrixXd dense() const;

 private:
  ModelParams params_;
  Eigen::VectorXd band_;
  Eigen::VectorXd coupling_;
};

Hamiltonian build_hamiltonian(const ModelParams& params);

/// Dense H assembled from kron products of the spin matrices; the reference
/// against which the structured apply is checked.
OperatorMatrix assemble_dense_hamiltonian(const ModelParams& params);

struct SymmetryReport {
  double site1_casimir = 0.0;  // ||[H, J_1^2]||_max
  double site2_casimir = 0.0;  // ||[H, J_2^2]||_max
  double swap = 0.0;           // ||[H, SWAP]||_max
  double parity = 0.0;         // ||[H, exp(i pi J_x) (x) exp(i pi J_x)]||_max
  double total_casimir = 0.0;  // ||[H, J_total^2]||_max, nonzero when mu != 0
  bool outside_studied_regime = false;
};

SymmetryReport check_symmetries(const Hamiltonian& h);

/// SWAP permutation: |m,n> -> |n,m>.
Eigen::MatrixXd swap_operator(SpinJ j);

/// exp(i theta J_x) on a single site.
Eigen::MatrixXcd rotation_x(SpinJ j, double theta);

/// Apply SWAP to a product-basis vector.
Eigen::VectorXd apply_swap(const Eigen::VectorXd& v, SpinJ j);

}  // namespace ctops
