#include "ctops/entanglement.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <thread>

#include "ctops/errors.hpp"
#include "ctops/hamiltonian.hpp"

namespace ctops {

namespace {

constexpr double kEigenvalueFloor = 1e-14;

double shannon_bits(const Eigen::VectorXd& probs) {
  double s = 0.0;
  for (double p : probs) {
    if (p > kEigenvalueFloor) s -= p * std::log2(p);
  }
  return s;
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::clamp(threads, 1, std::max(n, 1));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

SweepRow solve_row(SpinJ j, double mu, const SolverOptions& solver) {
  SweepRow row;
  row.mu = mu;
  try {
    const Hamiltonian h(ModelParams{j, mu});
    const EigenResult gs = ground_state(h, solver);
    const QuantumState psi(j, Eigen::VectorXd(gs.eigenvectors.col(0)));
    row.entropy_bits = entanglement_entropy(psi);
    row.ground_energy = gs.eigenvalues.front();
    row.gap = gs.gap;
    row.degenerate_flag = gs.quasi_degenerate;
  } catch (const Error& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

double entropy_at(SpinJ j, double mu, const SolverOptions& solver) {
  const SweepRow row = solve_row(j, mu, solver);
  if (row.failed) throw ConvergenceError("ground state at mu=" + std::to_string(mu) + ": " + row.error, std::nan(""));
  return row.entropy_bits;
}

}  // namespace

QuantumState::QuantumState(SpinJ j, Eigen::VectorXcd amplitudes)
    : j_(j), amps_(std::move(amplitudes)) {
  const long long d = j_.dim();
  if (amps_.size() != d * d) {
    throw DomainError("state length " + std::to_string(amps_.size()) +
                      " is not (2j+1)^2 = " + std::to_string(d * d));
  }
  if (std::abs(amps_.norm() - 1.0) > 1e-10) {
    throw DomainError("state is not normalized (norm " + std::to_string(amps_.norm()) + ")");
  }
}

QuantumState::QuantumState(SpinJ j, const Eigen::VectorXd& amplitudes)
    : QuantumState(j, Eigen::VectorXcd(amplitudes.cast<std::complex<double>>())) {}

QuantumState QuantumState::normalized(SpinJ j, Eigen::VectorXcd amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0)) throw DomainError("cannot normalize a zero vector");
  amplitudes /= n;
  return QuantumState(j, std::move(amplitudes));
}

Eigen::MatrixXcd QuantumState::coefficient_matrix() const {
  const int d = j_.dim();
  // Eigen is column-major; the transpose of a column-major map is the row-major reshape.
  return Eigen::Map<const Eigen::MatrixXcd>(amps_.data(), d, d).transpose();
}

ReducedDensityMatrix reduce(const QuantumState& state, int subsystem) {
  const Eigen::MatrixXcd c = state.coefficient_matrix();
  if (subsystem == 1) return {c * c.adjoint(), 1};
  if (subsystem == 2) return {c.transpose() * c.conjugate(), 2};
  throw DomainError("subsystem must be 1 or 2");
}

double entropy_bits(const ReducedDensityMatrix& rho) {
  const double tr = rho.entries.trace().real();
  if (std::abs(tr - 1.0) > 1e-8) {
    throw NormalizationError("reduced density matrix has trace " + std::to_string(tr));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries, Eigen::EigenvaluesOnly);
  return shannon_bits(es.eigenvalues().cwiseMax(0.0));
}

double entanglement_entropy(const QuantumState& state) { return entropy_bits(reduce(state, 1)); }

double entanglement_entropy_svd(const QuantumState& state) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state.coefficient_matrix());
  return shannon_bits(svd.singularValues().array().square().matrix());
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("grid needs finite lo <= hi and step > 0");
  }
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> grid(static_cast<std::size_t>(n));
  // lo + i*step carries representation noise (0.1*3 = 0.30000000000000004);
  // snap nodes to 12 significant digits so sweeps print the couplings asked for.
  const bool snap = step > 1e-10 * std::max(std::abs(lo), std::abs(hi));
  for (long i = 0; i < n; ++i) {
    double x = lo + static_cast<double>(i) * step;
    if (snap) {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
      std::from_chars(buf, res.ptr, x);
    }
    grid[static_cast<std::size_t>(i)] = x;
  }
  return grid;
}

std::vector<SweepRow> sweep(SpinJ j, const std::vector<double>& mu_grid, const SweepOptions& opts) {
  if (!std::is_sorted(mu_grid.begin(), mu_grid.end())) {
    throw DomainError("mu grid must be sorted ascending");
  }
  std::vector<SweepRow> rows(mu_grid.size());
  parallel_for(static_cast<int>(mu_grid.size()), opts.threads,
               [&](int i) { rows[i] = solve_row(j, mu_grid[i], opts.solver); });
  return rows;
}

CriticalPointRecord find_mu_qc(SpinJ j, const PeakSearchOptions& opts) {
  if (!(opts.coarse_step > 0.0) || opts.coarse_step > 0.05) {
    throw DomainError("coarse_step must lie in (0, 0.05]");
  }
  if (!(opts.refine_tol > 0.0)) throw DomainError("refine_tol must be positive");
  if (!(opts.window_lo < opts.window_hi)) throw DomainError("empty scan window");

  const std::vector<double> grid = make_grid(opts.window_lo, opts.window_hi, opts.coarse_step);
  const std::vector<SweepRow> rows = sweep(j, grid, opts.sweep);
  for (const auto& row : rows) {
    if (row.failed) throw ConvergenceError("coarse scan failed at mu=" + std::to_string(row.mu) + ": " + row.error, std::nan(""));
  }
  const auto best = std::max_element(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.entropy_bits < b.entropy_bits;
  });
  const auto i = static_cast<std::size_t>(best - rows.begin());

  CriticalPointRecord rec;
  rec.j = j;
  rec.grid_step = opts.coarse_step;
  rec.mu_qc = best->mu;
  rec.s_max = best->entropy_bits;
  if (i == 0 || i + 1 == rows.size()) {
    rec.has_peak = false;
    rec.mu_lo = rec.mu_hi = best->mu;
    return rec;
  }

  // Golden-section maximization on [mu_{i-1}, mu_{i+1}].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = grid[i - 1];
  double hi = grid[i + 1];
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = entropy_at(j, x1, opts.sweep.solver);
  double f2 = entropy_at(j, x2, opts.sweep.solver);
  double best_mu = rec.mu_qc;
  double best_s = rec.s_max;
  auto track = [&](double x, double f) {
    if (f > best_s) {
      best_s = f;
      best_mu = x;
    }
  };
  track(x1, f1);
  track(x2, f2);
  while (hi - lo >= opts.refine_tol) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = entropy_at(j, x1, opts.sweep.solver);
      track(x1, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = entropy_at(j, x2, opts.sweep.solver);
      track(x2, f2);
    }
  }
  // The best evaluated point can sit just outside the final bracket when the
  // profile is flat at round-off level; widen the reported bracket to cover it.
  rec.mu_lo = std::min(lo, best_mu - 0.5 * opts.refine_tol);
  rec.mu_hi = std::max(hi, best_mu + 0.5 * opts.refine_tol);
  rec.mu_qc = best_mu;
  rec.s_max = best_s;
  rec.has_peak = true;
  return rec;
}

}  // namespace ctops
