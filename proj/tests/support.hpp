#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "ctops/entanglement.hpp"
#include "ctops/spin_algebra.hpp"

namespace testing {

// Hand-rolled generators: every property test draws from a fixed seed so a
// failure reproduces exactly.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Eigen::VectorXd real_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  Eigen::VectorXcd complex_vector(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v[i] = {normal(), normal()};
    return v;
  }

  Eigen::MatrixXd symmetric(int n) {
    Eigen::MatrixXd a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = normal();
    return 0.5 * (a + a.transpose());
  }

  ctops::QuantumState state(ctops::SpinJ j) {
    return ctops::QuantumState::normalized(j, complex_vector(j.dim() * j.dim()));
  }

  // Random unit vector, uniform on the sphere.
  std::array<double, 3> unit() {
    Eigen::Vector3d v(normal(), normal(), normal());
    v.normalize();
    return {v[0], v[1], v[2]};
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Random unitary from the QR factorization of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(Gen& g, int n) {
  Eigen::MatrixXcd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = {g.normal(), g.normal()};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

}  // namespace testing
