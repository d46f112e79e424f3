#include "ctops/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ctops/errors.hpp"

namespace ctops {

namespace {

constexpr double kStartPerturbation = 1e-8;

struct LanczosRun {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  double residual = std::numeric_limits<double>::infinity();
  double next_value = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool breakdown = false;
};

// Symmetry sector as eigenvalues of SWAP and of the site-wise reflection
// m -> -m; 0 leaves that symmetry unconstrained.
struct Sector {
  int swap = 0;
  int reflect = 0;
};

// Rounding slowly feeds components from other sectors into a Krylov run. In a
// sector above the ground level those components would converge to the lower
// level, so every new basis vector is projected back.
void project(Eigen::VectorXd& v, int d, const Sector& sector) {
  if (sector.swap != 0) {
    for (int a = 0; a < d; ++a) {
      for (int b = a; b < d; ++b) {
        const double x = v[a * d + b], y = v[b * d + a];
        v[a * d + b] = 0.5 * (x + sector.swap * y);
        v[b * d + a] = 0.5 * (y + sector.swap * x);
      }
    }
  }
  if (sector.reflect != 0) {
    const int n = d * d;
    for (int i = 0; i < n / 2 + 1; ++i) {
      const int k = n - 1 - i;  // (a, b) -> (d-1-a, d-1-b)
      if (k < i) break;
      const double x = v[i], y = v[k];
      v[i] = 0.5 * (x + sector.reflect * y);
      v[k] = 0.5 * (y + sector.reflect * x);
    }
  }
}

// Test the tridiagonal often while it is small, then about every tenth step.
bool should_check(int m) { return m <= 20 || m % std::max(1, m / 10) == 0; }

double max_residual(const Hamiltonian& h, const Eigen::MatrixXd& vecs,
                    const std::vector<double>& vals) {
  double worst = 0.0;
  for (int i = 0; i < vecs.cols(); ++i) {
    const Eigen::VectorXd v = vecs.col(i);
    worst = std::max(worst, (h.apply(v) - vals[i] * v).norm());
  }
  return worst;
}

LanczosRun run_lanczos(const Hamiltonian& h, const Eigen::VectorXd& start, int count,
                       const SolverOptions& opts, const Sector& sector = {}) {
  const int n = h.dim();
  const int kmax = std::min(opts.max_iterations, n);
  if (count < 1 || count > n) {
    throw DomainError("requested " + std::to_string(count) + " eigenpairs of a dim " +
                      std::to_string(n) + " operator");
  }
  if (start.size() != n) throw DomainError("start vector length does not match dim");
  const double start_norm = start.norm();
  if (!(start_norm > 0.0)) throw DomainError("start vector is zero");

  Eigen::MatrixXd basis(n, std::min(kmax, 64));
  basis.col(0) = start / start_norm;
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXd w(n);
  double norm_est = 0.0;
  double best_residual = std::numeric_limits<double>::infinity();

  for (int k = 0; k < kmax; ++k) {
    h.apply(std::span<const double>(basis.col(k).data(), static_cast<std::size_t>(n)),
            std::span<double>(w.data(), static_cast<std::size_t>(n)));
    const double a = basis.col(k).dot(w);
    w -= a * basis.col(k);
    if (k > 0) w -= beta[k - 1] * basis.col(k - 1);
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeffs = basis.leftCols(k + 1).transpose() * w;
      w -= basis.leftCols(k + 1) * coeffs;
    }
    project(w, h.site_dim(), sector);
    const double b = w.norm();
    alpha.push_back(a);
    const int m = k + 1;
    norm_est = std::max(norm_est, std::abs(a) + b + (k > 0 ? beta[k - 1] : 0.0));
    const bool broke = b <= 1e-13 * std::max(norm_est, 1.0);
    const bool last = m == kmax;

    if (broke || last || should_check(m)) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = m > 1 ? Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1)
                                  : Eigen::VectorXd();
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      if (tri.info() != Eigen::Success) {
        throw ConvergenceError("tridiagonal eigensolve failed", best_residual);
      }
      const int have = std::min(count, m);
      bool estimates_ok = have == count;
      for (int i = 0; i < have && estimates_ok; ++i) {
        estimates_ok = std::abs(b * tri.eigenvectors()(m - 1, i)) <= 0.1 * opts.tol;
      }
      if (estimates_ok || broke || last) {
        LanczosRun run;
        run.values.assign(tri.eigenvalues().data(), tri.eigenvalues().data() + have);
        run.vectors = basis.leftCols(m) * tri.eigenvectors().leftCols(have);
        for (int i = 0; i < have; ++i) run.vectors.col(i).normalize();
        run.residual = max_residual(h, run.vectors, run.values);
        run.iterations = m;
        run.breakdown = broke;
        if (m > have) run.next_value = tri.eigenvalues()[have];
        best_residual = std::min(best_residual, run.residual);
        if (have == count && run.residual <= opts.tol) return run;
        if (broke || last) {
          throw ConvergenceError("Lanczos stopped at Krylov dimension " + std::to_string(m) +
                                     " with residual " + std::to_string(run.residual),
                                 best_residual);
        }
      }
    }

    beta.push_back(b);
    if (basis.cols() == m) {
      basis.conservativeResize(Eigen::NoChange, std::min(kmax, 2 * m));
    }
    basis.col(m) = w / b;
  }
  throw ConvergenceError("Lanczos exhausted its iteration budget", best_residual);
}

EigenResult to_result(const LanczosRun& run) {
  EigenResult r;
  r.eigenvalues = run.values;
  r.eigenvectors = run.vectors;
  r.residual_norm = run.residual;
  r.iterations = run.iterations;
  if (!std::isnan(run.next_value)) r.gap = run.next_value - run.values.front();
  return r;
}

void sort_ascending(EigenResult& r) {
  std::vector<int> order(r.eigenvalues.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return r.eigenvalues[x] < r.eigenvalues[y]; });
  std::vector<double> vals(order.size());
  Eigen::MatrixXd vecs(r.eigenvectors.rows(), r.eigenvectors.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    vals[i] = r.eigenvalues[order[i]];
    if (r.eigenvectors.size() > 0) vecs.col(static_cast<Eigen::Index>(i)) = r.eigenvectors.col(order[i]);
  }
  r.eigenvalues = std::move(vals);
  if (r.eigenvectors.size() > 0) r.eigenvectors = std::move(vecs);
}

}  // namespace

Eigen::VectorXd staggered_start(SpinJ j) {
  const int d = j.dim();
  Eigen::VectorXd v(d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) v[a * d + b] = ((a + b) % 2 == 0) ? 1.0 : -1.0;
  }
  return v / v.norm();
}

Eigen::VectorXd partner_start(SpinJ j, double mu) {
  // mu >= 0: antisymmetric under SWAP and odd under reflection, the sector of
  // (|j,-j> - |-j,j>). mu < 0: symmetric under SWAP and odd under reflection,
  // the sector of (|j,j> - |-j,-j>).
  const int d = j.dim();
  Eigen::VectorXd v = staggered_start(j);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const int key = mu >= 0.0 ? b - a : a + b - (d - 1);
      v[a * d + b] *= static_cast<double>((key > 0) - (key < 0));
    }
  }
  return v / v.norm();
}

EigenResult lowest_eigenpairs(const Hamiltonian& h, int count, const SolverOptions& opts,
                              std::optional<Eigen::VectorXd> start) {
  if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
  return to_result(run_lanczos(h, start ? *start : staggered_start(h.spin()), count, opts));
}

EigenResult ground_state(const Hamiltonian& h, const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw DomainError("tolerance must be positive");
  const SpinJ j = h.spin();
  LanczosRun main = run_lanczos(h, staggered_start(j), 1, opts);
  if (main.breakdown && main.iterations < h.dim()) {
    // An invariant subspace was exhausted early. Retry from a start vector
    // that is not confined to it in case the ground level was missed.
    Eigen::VectorXd s = staggered_start(j);
    s[0] += kStartPerturbation;
    LanczosRun retry = run_lanczos(h, s, 1, opts);
    if (retry.values.front() < main.values.front()) main = std::move(retry);
  }
  EigenResult r = to_result(main);

  const Sector partner_sector{h.params().mu >= 0.0 ? -1 : 1, -1};
  const LanczosRun partner = run_lanczos(h, partner_start(j, h.params().mu), 1, opts, partner_sector);
  const double e0 = r.eigenvalues.front();
  const double ep = partner.values.front();
  if (ep < e0 - 1e-8 * std::max(1.0, std::abs(e0))) {
    throw ConvergenceError("partner sector lies below the symmetric ground level", r.residual_norm);
  }
  double gap = std::abs(ep - e0);
  if (!std::isnan(main.next_value)) gap = std::min(gap, main.next_value - e0);
  r.gap = gap;
  r.quasi_degenerate = gap < opts.degeneracy_threshold;
  return r;
}

EigenResult full_spectrum(const Eigen::MatrixXd& dense, bool with_vectors) {
  if (dense.rows() != dense.cols()) throw DomainError("full_spectrum needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      dense, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("tridiagonal QL iteration did not converge", std::nan(""));
  }
  EigenResult r;
  r.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  if (with_vectors) {
    r.eigenvectors = es.eigenvectors();
    r.residual_norm =
        (dense * r.eigenvectors - r.eigenvectors * es.eigenvalues().asDiagonal()).colwise().norm().maxCoeff();
  }
  if (r.eigenvalues.size() > 1) r.gap = r.eigenvalues[1] - r.eigenvalues[0];
  return r;
}

EigenResult full_spectrum(const Hamiltonian& h, bool with_vectors) {
  return full_spectrum(h.dense(), with_vectors);
}

EigenResult jacobi_oracle(const Eigen::MatrixXd& dense) {
  const auto n = dense.rows();
  if (n != dense.cols()) throw DomainError("jacobi_oracle needs a square matrix");
  if (n > kJacobiDimCap) {
    throw DimensionError("jacobi_oracle is limited to dim " + std::to_string(kJacobiDimCap));
  }
  Eigen::MatrixXd a = 0.5 * (dense + dense.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  constexpr int kMaxSweeps = 100;
  constexpr double kOffTol = 1e-13;

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = 0; q < n; ++q) {
        if (p != q) s += a(p, q) * a(p, q);
      }
    }
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < kMaxSweeps && off_norm() >= kOffTol; ++sweep) {
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_norm() >= kOffTol) {
    throw ConvergenceError("Jacobi sweeps did not converge", off_norm());
  }

  EigenResult r;
  r.eigenvalues.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) r.eigenvalues[static_cast<std::size_t>(i)] = a(i, i);
  r.eigenvectors = v;
  r.iterations = sweep;
  sort_ascending(r);
  if (n > 0) {
    Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(r.eigenvalues.data(), n);
    r.residual_norm =
        (dense * r.eigenvectors - r.eigenvectors * lam.asDiagonal()).colwise().norm().maxCoeff();
  }
  if (n > 1) r.gap = r.eigenvalues[1] - r.eigenvalues[0];
  return r;
}

}  // namespace ctops
