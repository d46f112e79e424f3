#include "ctops/spin_algebra.hpp"

#include <cmath>
#include <string>

#include "ctops/errors.hpp"

namespace ctops {

SpinJ::SpinJ(int twice_j) : twice_j_(twice_j) {
  if (twice_j < 0) {
    throw DomainError("twice_j must be non-negative, got " + std::to_string(twice_j));
  }
}

namespace {

bool all_real(const Eigen::MatrixXcd& m) { return (m.imag().array() == 0.0).all(); }

}  // namespace

OperatorMatrix::OperatorMatrix(Eigen::MatrixXcd entries)
    : entries_(std::move(entries)), real_(all_real(entries_)) {
  if (entries_.rows() != entries_.cols()) {
    throw DomainError("operator matrix must be square");
  }
}

OperatorMatrix::OperatorMatrix(const Eigen::MatrixXd& entries)
    : OperatorMatrix(Eigen::MatrixXcd(entries.cast<std::complex<double>>())) {}

OperatorMatrix OperatorMatrix::identity(int dim) {
  return OperatorMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Identity(dim, dim)));
}

Eigen::MatrixXd OperatorMatrix::real_entries() const {
  if (!real_) throw DomainError("operator matrix has imaginary entries");
  return entries_.real();
}

bool OperatorMatrix::is_hermitian(double tol) const {
  return max_norm(entries_ - entries_.adjoint()) <= tol;
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& rhs) const {
  return OperatorMatrix(Eigen::MatrixXcd(entries_ * rhs.entries_));
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& rhs) const {
  return OperatorMatrix(Eigen::MatrixXcd(entries_ + rhs.entries_));
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& rhs) const {
  return OperatorMatrix(Eigen::MatrixXcd(entries_ - rhs.entries_));
}

OperatorMatrix OperatorMatrix::operator*(std::complex<double> s) const {
  return OperatorMatrix(Eigen::MatrixXcd(entries_ * s));
}

double max_norm(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a * b - b * a;
}

Eigen::VectorXd jz_diagonal(SpinJ j) {
  Eigen::VectorXd d(j.dim());
  for (int i = 0; i < j.dim(); ++i) d[i] = j.m(i);
  return d;
}

Eigen::VectorXd jx_band(SpinJ j) {
  // <m+1|J_x|m> = sqrt(j(j+1) - m(m+1)) / 2
  Eigen::VectorXd band(j.dim() - 1);
  for (int i = 0; i + 1 < j.dim(); ++i) {
    const double m = j.m(i);
    band[i] = 0.5 * std::sqrt(j.casimir() - m * (m + 1.0));
  }
  return band;
}

OperatorMatrix build_jz(SpinJ j) {
  return OperatorMatrix(Eigen::MatrixXd(jz_diagonal(j).asDiagonal()));
}

OperatorMatrix build_jplus(SpinJ j) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(j.dim(), j.dim());
  for (int i = 0; i + 1 < j.dim(); ++i) {
    const double m = j.m(i);
    p(i + 1, i) = std::sqrt(j.casimir() - m * (m + 1.0));
  }
  return OperatorMatrix(p);
}

OperatorMatrix build_jminus(SpinJ j) {
  return OperatorMatrix(Eigen::MatrixXd(build_jplus(j).real_entries().transpose()));
}

std::pair<OperatorMatrix, OperatorMatrix> build_jx_jy(SpinJ j) {
  const Eigen::MatrixXd p = build_jplus(j).real_entries();
  const Eigen::MatrixXd mm = p.transpose();
  Eigen::MatrixXd jx = 0.5 * (p + mm);
  // (J_+ - J_-) / (2i) = -i (J_+ - J_-) / 2
  Eigen::MatrixXcd jy = std::complex<double>(0.0, -0.5) * (p - mm).cast<std::complex<double>>();
  return {OperatorMatrix(jx), OperatorMatrix(std::move(jy))};
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b, int max_dim) {
  const long long dim = static_cast<long long>(a.dim()) * b.dim();
  if (dim > max_dim) {
    throw DimensionError("kron dimension " + std::to_string(dim) + " exceeds cap " +
                         std::to_string(max_dim));
  }
  const int da = a.dim();
  const int db = b.dim();
  Eigen::MatrixXcd out(dim, dim);
  for (int i = 0; i < da; ++i) {
    for (int k = 0; k < da; ++k) {
      out.block(i * db, k * db, db, db) = a.entries()(i, k) * b.entries();
    }
  }
  return OperatorMatrix(std::move(out));
}

}  // namespace ctops
