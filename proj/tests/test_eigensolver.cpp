#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ctops/eigensolver.hpp"
#include "ctops/errors.hpp"
#include "ctops/phase_space.hpp"
#include "support.hpp"

using namespace ctops;

TEST_SUITE("eigensolver") {

TEST_CASE("jacobi oracle on small examples") {
  const auto diag = jacobi_oracle(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix());
  CHECK(diag.eigenvalues == std::vector<double>{1, 2, 3});
  const auto pauli = jacobi_oracle((Eigen::Matrix2d() << 0, 1, 1, 0).finished());
  CHECK(pauli.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(pauli.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(jacobi_oracle(Eigen::MatrixXd::Identity(513, 513)), DimensionError);
}

TEST_CASE("property: jacobi and the library eigensolver agree on random symmetric matrices") {
  testing::Gen g(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = g.integer(2, 30);
    const Eigen::MatrixXd a = g.symmetric(n);
    const auto x = jacobi_oracle(a);
    const auto y = full_spectrum(a, true);
    for (int k = 0; k < n; ++k) CHECK(std::abs(x.eigenvalues[k] - y.eigenvalues[k]) < 1e-10);
    // Eigenvectors really are eigenvectors.
    const Eigen::MatrixXd& v = y.eigenvectors;
    const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(y.eigenvalues.data(), n);
    CHECK((a * v - v * w.asDiagonal()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("ground energy at zero coupling is -2j") {
  for (int tj : {1, 2, 3, 10, 28, 41}) {
    CAPTURE(tj);
    const auto gs = ground_state(Hamiltonian(ModelParams{SpinJ(tj), 0.0}));
    CHECK(std::abs(gs.eigenvalues[0] + tj) < 1e-10);
    CHECK(gs.residual_norm <= 1e-11);
    CHECK(gs.gap == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("j = 5, mu = 0 ground state is the product of minimal-Jx states") {
  const SpinJ j(10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> site(build_jx_jy(j).first.real_entries());
  const Eigen::VectorXd low = site.eigenvectors().col(0);
  Eigen::VectorXd product(j.dim() * j.dim());
  for (int a = 0; a < j.dim(); ++a)
    for (int b = 0; b < j.dim(); ++b) product[a * j.dim() + b] = low[a] * low[b];
  const auto gs = ground_state(Hamiltonian(ModelParams{j, 0.0}));
  CHECK(gs.eigenvalues[0] == doctest::Approx(-10.0).epsilon(1e-12));
  CHECK(std::abs(product.dot(gs.eigenvectors.col(0))) > 1.0 - 1e-10);
}

TEST_CASE("j = 1, mu = 2 against a frozen dense value") {
  // Frozen from an independent LAPACK diagonalization of the 9x9 matrix.
  const double frozen = -2.6131259297527527;
  const Hamiltonian h(ModelParams{SpinJ(2), 2.0});
  const auto gs = ground_state(h);
  CHECK(std::abs(gs.eigenvalues[0] - frozen) < 1e-10 * std::abs(frozen));
  CHECK(std::abs(jacobi_oracle(h.dense()).eigenvalues[0] - frozen) < 1e-12);
}

TEST_CASE("j = 2, mu = 1 full spectrum matches the jacobi oracle") {
  const Hamiltonian h(ModelParams{SpinJ(4), 1.0});
  const auto a = full_spectrum(h);
  const auto b = jacobi_oracle(h.dense());
  for (std::size_t k = 0; k < a.eigenvalues.size(); ++k) CHECK(std::abs(a.eigenvalues[k] - b.eigenvalues[k]) < 1e-10);
  CHECK(a.eigenvalues[0] == doctest::Approx(-4.154961411640432).epsilon(1e-12));
}

TEST_CASE("property: trace preservation") {
  testing::Gen g(32);
  for (int trial = 0; trial < 10; ++trial) {
    const int tj = g.integer(1, 12);
    const double mu = g.uniform(-3.0, 5.0);
    const auto s = full_spectrum(Hamiltonian(ModelParams{SpinJ(tj), mu}));
    double sum = 0.0;
    for (double e : s.eigenvalues) sum += e;
    CHECK(std::abs(sum) < 1e-10 * static_cast<double>(s.eigenvalues.size()));
  }
}

TEST_CASE("property: lanczos ground energy matches the jacobi oracle") {
  testing::Gen g(33);
  for (int trial = 0; trial < 20; ++trial) {
    const int tj = g.integer(1, 6);
    const double mu = g.uniform(0.0, 3.0);
    CAPTURE(tj);
    CAPTURE(mu);
    const Hamiltonian h(ModelParams{SpinJ(tj), mu});
    const double e_lanczos = ground_state(h).eigenvalues[0];
    const double e_oracle = jacobi_oracle(h.dense()).eigenvalues[0];
    CHECK(std::abs(e_lanczos - e_oracle) < 1e-10 * std::max(1.0, std::abs(e_oracle)));
  }
}

TEST_CASE("lowest eigenpairs from several starts") {
  testing::Gen g(34);
  const Hamiltonian h(ModelParams{SpinJ(5), 1.7});
  const auto exact = full_spectrum(h);
  const auto r = lowest_eigenpairs(h, 4, {}, g.real_vector(h.dim()));
  REQUIRE(r.eigenvalues.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r.eigenvalues[k] - exact.eigenvalues[k]) < 1e-9);
  CHECK(r.residual_norm <= 1e-11);
}

TEST_CASE("property: variational bound with coherent product states") {
  testing::Gen g(35);
  for (int trial = 0; trial < 10; ++trial) {
    const int tj = g.integer(1, 10);
    const double mu = g.uniform(0.0, 3.0);
    const SpinJ j(tj);
    const Hamiltonian h(ModelParams{j, mu});
    const double e0 = ground_state(h).eigenvalues[0];
    for (int k = 0; k < 5; ++k) {
      const QuantumState psi =
          coherent_product(j, {g.uniform(0, M_PI), g.uniform(0, 2 * M_PI)}, {g.uniform(0, M_PI), g.uniform(0, 2 * M_PI)});
      const Eigen::VectorXcd& v = psi.amplitudes();
      const Eigen::VectorXcd hv = h.apply(Eigen::VectorXd(v.real())).cast<std::complex<double>>() +
                                  std::complex<double>(0, 1) * h.apply(Eigen::VectorXd(v.imag())).cast<std::complex<double>>();
      CHECK(v.dot(hv).real() >= e0 - 1e-12);
    }
  }
}

TEST_CASE("determinism") {
  const Hamiltonian h(ModelParams{SpinJ(17), 1.3});
  const auto a = ground_state(h);
  const auto b = ground_state(h);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.gap == b.gap);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cat doublet at large coupling is flagged, not resolved") {
  const auto gs = ground_state(Hamiltonian(ModelParams{SpinJ(10), 50.0}));
  CHECK(gs.quasi_degenerate);
  CHECK(gs.eigenvalues[0] == doctest::Approx(-250.10000111114556).epsilon(1e-12));
  const auto small = ground_state(Hamiltonian(ModelParams{SpinJ(2), 50.0}));
  CHECK_FALSE(small.quasi_degenerate);
  CHECK(small.gap == doctest::Approx(1.998879667297615e-05).epsilon(1e-5));
}

TEST_CASE("ground state is even under swap") {
  const SpinJ j(9);
  const auto gs = ground_state(Hamiltonian(ModelParams{j, 2.2}));
  const Eigen::VectorXd v = gs.eigenvectors.col(0);
  CHECK((apply_swap(v, j) - v).norm() < 1e-10);
}

TEST_CASE("non-convergence carries the best residual") {
  SolverOptions opts;
  opts.max_iterations = 3;
  try {
    lowest_eigenpairs(Hamiltonian(ModelParams{SpinJ(12), 1.0}), 1, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_residual() > opts.tol);
  }
}

}
