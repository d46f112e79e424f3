#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ctops/eigensolver.hpp"
#include "ctops/entanglement.hpp"
#include "ctops/errors.hpp"
#include "support.hpp"

using namespace ctops;

namespace {

QuantumState ground(SpinJ j, double mu) {
  const auto gs = ground_state(Hamiltonian(ModelParams{j, mu}));
  return QuantumState(j, Eigen::VectorXd(gs.eigenvectors.col(0)));
}

ReducedDensityMatrix diag_rho(std::initializer_list<double> p) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(p.size()));
  Eigen::Index i = 0;
  for (double x : p) v[i++] = x;
  return {v.cast<std::complex<double>>().asDiagonal().toDenseMatrix(), 1};
}

}  // namespace

TEST_SUITE("entanglement") {

TEST_CASE("entropy of simple spectra") {
  CHECK(entropy_bits(diag_rho({1.0, 0.0, 0.0})) == 0.0);
  CHECK(entropy_bits(diag_rho({0.5, 0.5})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(entropy_bits(diag_rho({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(entropy_bits(diag_rho({0.5, 0.4})), NormalizationError);
}

TEST_CASE("product of minimal-Jx states is pure on each side") {
  const SpinJ j(6);
  const auto psi = ground(j, 0.0);
  const auto rho = reduce(psi, 1);
  CHECK(std::abs((rho.entries * rho.entries).trace().real() - 1.0) < 1e-10);
  CHECK(entanglement_entropy(psi) < 1e-10);
}

TEST_CASE("cat state reduces to two equal weights at the extremes") {
  const SpinJ j(5);
  const int d = j.dim();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d * d);
  v[(d - 1) * d + 0] = 1.0;  // |m = j, n = -j>
  v[0 * d + (d - 1)] = 1.0;  // |m = -j, n = j>
  const QuantumState cat = QuantumState::normalized(j, v.cast<std::complex<double>>());
  const auto rho = reduce(cat, 1);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(d, d);
  expect(0, 0) = expect(d - 1, d - 1) = 0.5;
  CHECK((rho.entries.real() - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(entanglement_entropy(cat) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("property: Schmidt symmetry and the two entropy routes") {
  testing::Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const SpinJ j(g.integer(1, 8));
    const QuantumState psi = g.state(j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(reduce(psi, 1).entries);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e2(reduce(psi, 2).entries);
    CHECK((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(entanglement_entropy(psi) - entanglement_entropy_svd(psi)) < 1e-10);
    const double s = entanglement_entropy(psi);
    CHECK(s >= 0.0);
    CHECK(s <= std::log2(j.dim()) + 1e-12);
  }
}

TEST_CASE("property: local unitaries leave the entropy unchanged") {
  testing::Gen g(42);
  for (int trial = 0; trial < 10; ++trial) {
    const SpinJ j(g.integer(1, 6));
    const int d = j.dim();
    const QuantumState psi = g.state(j);
    const Eigen::MatrixXcd u1 = testing::random_unitary(g, d);
    const Eigen::MatrixXcd u2 = testing::random_unitary(g, d);
    const Eigen::MatrixXcd c = u1 * psi.coefficient_matrix() * u2.transpose();
    Eigen::VectorXcd flat(d * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) flat[a * d + b] = c(a, b);
    const QuantumState rotated = QuantumState::normalized(j, flat);
    CHECK(std::abs(entanglement_entropy(rotated) - entanglement_entropy(psi)) < 1e-10);
  }
}

TEST_CASE("state construction checks") {
  CHECK_THROWS_AS(QuantumState(SpinJ(1), Eigen::VectorXd(Eigen::VectorXd::Ones(3))), DomainError);
  CHECK_THROWS_AS(QuantumState(SpinJ(1), Eigen::VectorXd(Eigen::VectorXd::Ones(4))), DomainError);
  CHECK_NOTHROW(QuantumState(SpinJ(1), Eigen::VectorXd(Eigen::Vector4d(0.5, 0.5, 0.5, 0.5))));
}

TEST_CASE("j = 1/2 profile rises monotonically towards one bit") {
  const auto rows = sweep(SpinJ(1), {0, 1, 2, 4, 8});
  CHECK(rows.front().entropy_bits < 1e-10);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].entropy_bits >= rows[i - 1].entropy_bits);
  CHECK(rows.back().entropy_bits > 0.9);
  CHECK(rows.back().entropy_bits < 1.0);
}

TEST_CASE("zero coupling is separable for every j") {
  for (int tj : {1, 2, 3, 8, 28}) CHECK(entanglement_entropy(ground(SpinJ(tj), 0.0)) < 1e-9);
}

TEST_CASE("large-coupling asymptote approaches one bit") {
  // Frozen regression values produced by this solver (cat limit S -> 1).
  for (int tj : {2, 10, 28}) {
    CAPTURE(tj);
    const double s = entanglement_entropy(ground(SpinJ(tj), 50.0));
    CHECK(std::abs(s - 1.0) < 0.05);
  }
}

TEST_CASE("j = 14 entropy peaks near 1.184") {
  const auto rows = sweep(SpinJ(28), {0.0, 0.7, 1.184, 1.55});
  CHECK(rows[2].entropy_bits > rows[1].entropy_bits);
  CHECK(rows[2].entropy_bits > rows[3].entropy_bits);
}

TEST_CASE("critical coupling search") {
  const auto half = find_mu_qc(SpinJ(1));
  CHECK_FALSE(half.has_peak);

  const auto r5 = find_mu_qc(SpinJ(10));
  const auto r20 = find_mu_qc(SpinJ(40));
  REQUIRE(r5.has_peak);
  REQUIRE(r20.has_peak);
  CHECK(r5.mu_qc > r20.mu_qc);
  CHECK(r20.mu_qc > 1.0);
  CHECK(r5.mu_hi - r5.mu_lo <= 1e-4 + 1e-12);
  // Frozen regression baselines from this solver.
  CHECK(r5.mu_qc == doctest::Approx(1.40895).epsilon(1e-4));
  CHECK(r20.mu_qc == doctest::Approx(1.14220).epsilon(1e-4));

  PeakSearchOptions bad;
  bad.coarse_step = 0.1;
  CHECK_THROWS_AS(find_mu_qc(SpinJ(4), bad), DomainError);
}

TEST_CASE("sweep validates its grid and keeps order") {
  CHECK_THROWS_AS(sweep(SpinJ(2), {1.0, 0.5}), DomainError);
  SweepOptions opts;
  opts.threads = 3;
  const auto grid = make_grid(0.0, 2.0, 0.25);
  REQUIRE(grid.size() == 9);
  CHECK(grid.back() == 2.0);
  const auto a = sweep(SpinJ(6), grid, opts);
  const auto b = sweep(SpinJ(6), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a[i].mu == grid[i]);
    CHECK(a[i].entropy_bits == b[i].entropy_bits);
  }
}

}
