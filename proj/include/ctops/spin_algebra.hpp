#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace ctops {

/// Dense matrices larger than this are never materialized (j <= 31.5 per site).
inline constexpr int kDenseDimCap = 4096;

/// Spin quantum number j, stored as the integer 2j so half-integers are exact.
class SpinJ {
 public:
  explicit SpinJ(int twice_j);

  int twice_j() const noexcept { return twice_j_; }
  int dim() const noexcept { return twice_j_ + 1; }
  double value() const noexcept { return 0.5 * twice_j_; }
  double casimir() const noexcept { return value() * (value() + 1.0); }

  /// Magnetic quantum number at basis position `index` (ascending, m = -j first).
  double m(int index) const noexcept { return index - value(); }

  friend bool operator==(SpinJ, SpinJ) = default;

 private:
  int twice_j_;
};

/// Square operator matrix in the ascending J_z basis.
///
/// Entries are always stored complex; `is_real()` is fixed at construction and
/// lets callers take the real-symmetric fast path without re-scanning.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(Eigen::MatrixXcd entries);
  explicit OperatorMatrix(const Eigen::MatrixXd& entries);

  static OperatorMatrix identity(int dim);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  bool is_real() const noexcept { return real_; }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }

  /// Real part; throws DomainError when the matrix carries imaginary entries.
  Eigen::MatrixXd real_entries() const;

  bool is_hermitian(double tol = 0.0) const;

  OperatorMatrix operator*(const OperatorMatrix& rhs) const;
  OperatorMatrix operator+(const OperatorMatrix& rhs) const;
  OperatorMatrix operator-(const OperatorMatrix& rhs) const;
  OperatorMatrix operator*(std::complex<double> s) const;

 private:
  Eigen::MatrixXcd entries_;
  bool real_ = true;
};

/// Max-norm of a matrix (largest absolute entry).
double max_norm(const Eigen::MatrixXcd& m);

/// Commutator [a, b] = ab - ba.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

OperatorMatrix build_jz(SpinJ j);

/// J_+|j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>.
OperatorMatrix build_jplus(SpinJ j);

OperatorMatrix build_jminus(SpinJ j);

/// (J_x, J_y) with J_x = (J_+ + J_-)/2 and J_y = (J_+ - J_-)/(2i).
std::pair<OperatorMatrix, OperatorMatrix> build_jx_jy(SpinJ j);

/// Superdiagonal of J_x: entry k couples basis positions k and k+1.
Eigen::VectorXd jx_band(SpinJ j);

/// Diagonal of J_z in the ascending basis.
Eigen::VectorXd jz_diagonal(SpinJ j);

/// Kronecker product with index = i_a * dim(b) + i_b (first factor is the slow index).
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b, int max_dim = kDenseDimCap);

}  // namespace ctops
