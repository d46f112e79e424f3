#include "ctops/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "ctops/errors.hpp"

namespace ctops {

void validate(const ModelParams& params) {
  if (params.j.twice_j() < 1) {
    throw DomainError("model runs need j >= 1/2 (twice_j >= 1)");
  }
  if (!std::isfinite(params.mu)) {
    throw DomainError("coupling mu must be finite");
  }
}

Hamiltonian::Hamiltonian(ModelParams params) : params_(params) {
  validate(params_);
  band_ = ctops::jx_band(params_.j);
  const Eigen::VectorXd jz = jz_diagonal(params_.j);
  const int d = site_dim();
  const double scale = params_.mu / params_.j.value();
  coupling_.resize(static_cast<Eigen::Index>(d) * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) coupling_[a * d + b] = scale * jz[a] * jz[b];
  }
}

void Hamiltonian::apply(std::span<const double> in, std::span<double> out) const {
  const auto n = static_cast<std::size_t>(dim());
  if (in.size() != n || out.size() != n) {
    throw DomainError("apply: vector length " + std::to_string(in.size()) + " != dim " +
                      std::to_string(n));
  }
  const int d = site_dim();
  for (std::size_t i = 0; i < n; ++i) out[i] = coupling_[static_cast<Eigen::Index>(i)] * in[i];

  // Amplitudes viewed as a d x d row-major matrix C[a][b] with a the site-1 index.
  // (J_x (x) I) acts on rows: out[a][*] += band[a-1] C[a-1][*] + band[a] C[a+1][*].
  for (int a = 0; a < d; ++a) {
    double* row = out.data() + static_cast<std::size_t>(a) * d;
    if (a > 0) {
      const double w = band_[a - 1];
      const double* src = in.data() + static_cast<std::size_t>(a - 1) * d;
      for (int b = 0; b < d; ++b) row[b] += w * src[b];
    }
    if (a + 1 < d) {
      const double w = band_[a];
      const double* src = in.data() + static_cast<std::size_t>(a + 1) * d;
      for (int b = 0; b < d; ++b) row[b] += w * src[b];
    }
  }
  // (I (x) J_x) acts within each row.
  for (int a = 0; a < d; ++a) {
    double* row = out.data() + static_cast<std::size_t>(a) * d;
    const double* src = in.data() + static_cast<std::size_t>(a) * d;
    for (int b = 0; b + 1 < d; ++b) {
      row[b] += band_[b] * src[b + 1];
      row[b + 1] += band_[b] * src[b];
    }
  }
}

Eigen::VectorXd Hamiltonian::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(v.size());
  apply(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
        std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

Eigen::MatrixXd Hamiltonian::dense() const {
  if (dim() > kDenseDimCap) {
    throw DimensionError("dense Hamiltonian of dim " + std::to_string(dim()) + " exceeds cap " +
                         std::to_string(kDenseDimCap));
  }
  const int d = site_dim();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) h(i, i) = coupling_[i];
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const int i = a * d + b;
      if (a + 1 < d) {
        h(i, i + d) = band_[a];
        h(i + d, i) = band_[a];
      }
      if (b + 1 < d) {
        h(i, i + 1) = band_[b];
        h(i + 1, i) = band_[b];
      }
    }
  }
  return h;
}

Hamiltonian build_hamiltonian(const ModelParams& params) { return Hamiltonian(params); }

OperatorMatrix assemble_dense_hamiltonian(const ModelParams& params) {
  validate(params);
  const SpinJ j = params.j;
  const auto id = OperatorMatrix::identity(j.dim());
  const auto jx = build_jx_jy(j).first;
  const auto jz = build_jz(j);
  return kron(jx, id) + kron(id, jx) + kron(jz, jz) * (params.mu / j.value());
}

Eigen::MatrixXd swap_operator(SpinJ j) {
  const int d = j.dim();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) s(b * d + a, a * d + b) = 1.0;
  }
  return s;
}

Eigen::VectorXd apply_swap(const Eigen::VectorXd& v, SpinJ j) {
  const int d = j.dim();
  Eigen::VectorXd out(v.size());
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) out[b * d + a] = v[a * d + b];
  }
  return out;
}

Eigen::MatrixXcd rotation_x(SpinJ j, double theta) {
  const Eigen::MatrixXd jx = build_jx_jy(j).first.real_entries();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jx);
  const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
  Eigen::VectorXcd phases(j.dim());
  for (int k = 0; k < j.dim(); ++k) {
    phases[k] = std::polar(1.0, theta * es.eigenvalues()[k]);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

SymmetryReport check_symmetries(const Hamiltonian& h) {
  const SpinJ j = h.spin();
  const OperatorMatrix hm(h.dense());
  const auto id = OperatorMatrix::identity(j.dim());
  const auto [jx, jy] = build_jx_jy(j);
  const auto jz = build_jz(j);
  const OperatorMatrix casimir = jx * jx + jy * jy + jz * jz;

  SymmetryReport report;
  report.outside_studied_regime = h.params().outside_studied_regime();
  report.site1_casimir = max_norm(commutator(hm, kron(casimir, id)).entries());
  report.site2_casimir = max_norm(commutator(hm, kron(id, casimir)).entries());
  report.swap = max_norm(commutator(hm, OperatorMatrix(swap_operator(j))).entries());

  const OperatorMatrix rx(rotation_x(j, M_PI));
  report.parity = max_norm(commutator(hm, kron(rx, rx)).entries());

  // J^2 = J_1^2 + J_2^2 + 2 J_1 . J_2
  const OperatorMatrix dot = kron(jx, jx) + kron(jy, jy) + kron(jz, jz);
  const OperatorMatrix total = kron(casimir, id) + kron(id, casimir) + dot * 2.0;
  report.total_casimir = max_norm(commutator(hm, total).entries());
  return report;
}

}  // namespace ctops
