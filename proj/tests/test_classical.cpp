#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ctops/classical.hpp"
#include "ctops/errors.hpp"
#include "support.hpp"

using namespace ctops;
using std::numbers::pi;

namespace {

double dist(const ClassicalState& a, const ClassicalState& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s = std::max({s, std::abs(a.l1[i] - b.l1[i]), std::abs(a.l2[i] - b.l2[i])});
  return s;
}

const FixedPointRecord& find(const std::vector<FixedPointRecord>& fps, Branch b) {
  for (const auto& fp : fps)
    if (fp.branch == b) return fp;
  throw std::runtime_error("branch missing");
}

// Damped Newton on the canonical flow from one start; returns true on convergence.
bool newton(CanonicalState& c, double mu) {
  for (int it = 0; it < 60; ++it) {
    const auto f = canonical_flow(c, mu);
    const Eigen::Vector4d fv(f[0], f[1], f[2], f[3]);
    if (fv.norm() < 1e-13) return true;
    const auto jac = canonical_jacobian(c, mu);
    const Eigen::Matrix4d m = Eigen::Map<const Eigen::Matrix<double, 4, 4, Eigen::RowMajor>>(jac.data());
    const Eigen::Vector4d step = m.fullPivLu().solve(fv);
    if (!step.allFinite()) return false;
    double scale = 1.0;
    while (scale > 1e-4 && (std::abs(c.z1 - scale * step[1]) >= 0.999 || std::abs(c.z2 - scale * step[3]) >= 0.999)) {
      scale *= 0.5;
    }
    c.phi1 -= scale * step[0];
    c.z1 -= scale * step[1];
    c.phi2 -= scale * step[2];
    c.z2 -= scale * step[3];
    if (std::abs(c.z1) >= 0.999 || std::abs(c.z2) >= 0.999) return false;
  }
  return false;
}

}  // namespace

TEST_SUITE("classical-dynamics") {

TEST_CASE("energy examples") {
  CHECK(classical_energy({{1, 0, 0}, {1, 0, 0}}, 3.7) == 2.0);
  CHECK(classical_energy({{-1, 0, 0}, {-1, 0, 0}}, 3.7) == -2.0);
  const double s = std::sqrt(3.0) / 2.0;
  CHECK(classical_energy({{0.5, 0, s}, {0.5, 0, s}}, 2.0) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK_THROWS_AS(classical_energy({{1.1, 0, 0}, {1, 0, 0}}, 1.0), DomainError);
}

TEST_CASE("free precession about x") {
  const auto d = equations_of_motion({{0, 1, 0}, {0, 1, 0}}, 0.0);
  // L x (1, 0, 0) for L = y-hat is -z-hat.
  CHECK(d.l1 == Vec3{0, 0, -1});
  CHECK(d.l2 == Vec3{0, 0, -1});
}

TEST_CASE("fixed points are equilibria") {
  for (double mu : {0.0, 0.5, 1.5, 2.0, 7.0}) {
    for (const auto& fp : enumerate_fixed_points(mu)) {
      const auto d = equations_of_motion(fp.coords, mu);
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(d.l1[i]) < 1e-12);
        CHECK(std::abs(d.l2[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("property: flow is tangent to both spheres and conserves energy") {
  testing::Gen g(61);
  for (int trial = 0; trial < 100; ++trial) {
    const ClassicalState s{g.unit(), g.unit()};
    const double mu = 2.0;
    const auto d = equations_of_motion(s, mu);
    double t1 = 0.0, t2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      t1 += s.l1[i] * d.l1[i];
      t2 += s.l2[i] * d.l2[i];
    }
    CHECK(std::abs(t1) < 1e-12);
    CHECK(std::abs(t2) < 1e-12);
    // dE/dt = dLx1 + dLx2 + mu (dLz1 Lz2 + Lz1 dLz2)
    const double de = d.l1[0] + d.l2[0] + mu * (d.l1[2] * s.l2[2] + s.l1[2] * d.l2[2]);
    CHECK(std::abs(de) < 1e-12);
  }
}

TEST_CASE("property: canonical flow is the vector flow in the chart") {
  testing::Gen g(62);
  for (int trial = 0; trial < 50; ++trial) {
    const ClassicalState s{g.unit(), g.unit()};
    if (std::abs(s.l1[2]) > 0.99 || std::abs(s.l2[2]) > 0.99) continue;
    const double mu = g.uniform(0.0, 3.0);
    const auto d = equations_of_motion(s, mu);
    const auto c = canonical_flow(to_canonical(s), mu);
    // dphi = (x dy - y dx) / (x^2 + y^2), dz = dz.
    const double r1 = s.l1[0] * s.l1[0] + s.l1[1] * s.l1[1];
    const double r2 = s.l2[0] * s.l2[0] + s.l2[1] * s.l2[1];
    CHECK(std::abs(c[0] - (s.l1[0] * d.l1[1] - s.l1[1] * d.l1[0]) / r1) < 1e-10);
    CHECK(std::abs(c[1] - d.l1[2]) < 1e-12);
    CHECK(std::abs(c[2] - (s.l2[0] * d.l2[1] - s.l2[1] * d.l2[0]) / r2) < 1e-10);
    CHECK(std::abs(c[3] - d.l2[2]) < 1e-12);
  }
}

TEST_CASE("property: analytic Jacobian matches finite differences") {
  testing::Gen g(63);
  for (int trial = 0; trial < 20; ++trial) {
    const CanonicalState c{g.uniform(0, 2 * pi), g.uniform(-0.9, 0.9), g.uniform(0, 2 * pi), g.uniform(-0.9, 0.9)};
    const double mu = g.uniform(0.0, 3.0);
    const auto jac = canonical_jacobian(c, mu);
    const double h = 1e-6;
    for (int col = 0; col < 4; ++col) {
      CanonicalState p = c, m = c;
      double* pp[] = {&p.phi1, &p.z1, &p.phi2, &p.z2};
      double* mm[] = {&m.phi1, &m.z1, &m.phi2, &m.z2};
      *pp[col] += h;
      *mm[col] -= h;
      const auto fp = canonical_flow(p, mu), fm = canonical_flow(m, mu);
      for (int row = 0; row < 4; ++row) {
        CHECK(std::abs(jac[row * 4 + col] - (fp[row] - fm[row]) / (2 * h)) < 1e-7);
      }
    }
  }
}

TEST_CASE("fixed point counts and stability below and above the bifurcation") {
  const auto low = enumerate_fixed_points(0.5);
  REQUIRE(low.size() == 4);
  CHECK(find(low, Branch::RightRight).stability == Stability::Elliptic);
  CHECK(find(low, Branch::LeftLeft).stability == Stability::Elliptic);
  CHECK(find(low, Branch::RightLeft).stability == Stability::Hyperbolic);
  CHECK(find(low, Branch::LeftRight).stability == Stability::Hyperbolic);

  const auto high = enumerate_fixed_points(2.0);
  REQUIRE(high.size() == 8);
  const double s = std::sqrt(0.75);
  for (Branch b : {Branch::A, Branch::B, Branch::C, Branch::D}) {
    const auto& fp = find(high, b);
    CHECK(fp.stability == Stability::Elliptic);
    CHECK(std::abs(std::abs(fp.coords.l1[2]) - s) < 1e-12);
    CHECK(std::abs(std::abs(fp.coords.l1[0]) - 0.5) < 1e-12);
  }
  CHECK(find(high, Branch::LeftLeft).stability == Stability::Hyperbolic);
  for (double mu : {0.3, 1.0, 2.5}) {
    CHECK(find(enumerate_fixed_points(mu), Branch::RightLeft).stability == Stability::Hyperbolic);
  }
}

TEST_CASE("stability flips across mu = 1") {
  for (Branch b : {Branch::RightRight, Branch::LeftLeft}) {
    CHECK(find(enumerate_fixed_points(1.0 - 1e-6), b).stability == Stability::Elliptic);
    CHECK(find(enumerate_fixed_points(1.0 + 1e-6), b).stability == Stability::Hyperbolic);
  }
}

TEST_CASE("emergent branch scales like a square root") {
  std::vector<double> x, y;
  for (int i = 0; i <= 20; ++i) {
    const double mu = 1.001 + 0.009 * i / 20.0;
    x.push_back(std::log(mu - 1.0));
    y.push_back(std::log(find(enumerate_fixed_points(mu), Branch::A).coords.l1[2]));
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope - 0.5) < 0.02);
}

TEST_CASE("bifurcation table") {
  const auto rows = bifurcation_diagram(0.8, 1.25, 10);
  int at_125 = 0;
  for (const auto& r : rows) {
    if (r.mu <= 1.0) {
      CHECK(r.lz1 == 0.0);
    }
    if (r.mu == 1.25 && r.stability == Stability::Elliptic) {
      ++at_125;
      CHECK(std::abs(std::abs(r.lz1) - 0.6) < 1e-12);
    }
  }
  CHECK(at_125 == 4);
  CHECK_THROWS_AS(bifurcation_diagram(1.0, 1.0, 5), DomainError);
}

TEST_CASE("newton search finds no unlisted fixed points") {
  for (double mu : {0.5, 2.0}) {
    CAPTURE(mu);
    const auto known = enumerate_fixed_points(mu);
    const int n = 12;
    int converged = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            CanonicalState s{2 * pi * (a + 0.5) / n, -0.95 + 1.9 * (b + 0.5) / n, 2 * pi * (c + 0.5) / n,
                             -0.95 + 1.9 * (d + 0.5) / n};
            if (!newton(s, mu)) continue;
            ++converged;
            const ClassicalState p = from_canonical(s);
            double best = 1e9;
            for (const auto& fp : known) best = std::min(best, dist(p, fp.coords));
            CHECK(best < 1e-8);
          }
    CHECK(converged > 0);
  }
}

TEST_CASE("chart singularity and non-equilibria are refused") {
  CHECK_THROWS_AS(linearize_and_classify({{0, 1, 0}, {0, 1, 0}}, 1.0, Branch::A), DomainError);
  CHECK_THROWS_AS(enumerate_fixed_points(-1.0), DomainError);
}

TEST_CASE("integration from an equilibrium stays put") {
  const auto a = find(enumerate_fixed_points(2.0), Branch::A).coords;
  const auto traj = integrate(a, 2.0, 0.01, 10000);
  CHECK(dist(traj.states.back(), a) < 1e-8);
}

TEST_CASE("small oscillation about a centre stays close") {
  auto s = find(enumerate_fixed_points(0.5), Branch::LeftLeft).coords;
  s.l1 = {-std::sqrt(1 - 1e-6), 1e-3, 0.0};
  const auto traj = integrate(s, 0.5, 0.01, 10000);
  const ClassicalState fp{{-1, 0, 0}, {-1, 0, 0}};
  for (const auto& st : traj.states) CHECK(dist(st, fp) < 1e-2);
}

TEST_CASE("property: RK4 conserves energy and the constraint") {
  testing::Gen g(64);
  for (int trial = 0; trial < 5; ++trial) {
    const ClassicalState s{g.unit(), g.unit()};
    const auto traj = integrate(s, 1.5, 0.01, 10000);
    CHECK(traj.max_energy_drift < 1e-9);
    CHECK(traj.max_constraint_drift < 1e-9);
  }
}

TEST_CASE("RK4 global error is fourth order") {
  const ClassicalState s{{0.6, 0.0, 0.8}, {0.0, 0.6, -0.8}};
  const double t = 2.0;
  auto end = [&](int steps) { return integrate(s, 1.5, t / steps, steps).states.back(); };
  const ClassicalState ref = end(6400);
  const double e1 = dist(end(100), ref);
  const double e2 = dist(end(200), ref);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.1));
}

}
