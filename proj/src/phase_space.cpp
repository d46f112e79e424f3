#include "ctops/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ctops/errors.hpp"

namespace ctops {

namespace {

constexpr double kPi = std::numbers::pi;

// log(n!) for n = 0..size-1 as a running sum.
std::vector<double> log_factorials(int size) {
  std::vector<double> lf(static_cast<std::size_t>(size), 0.0);
  for (int n = 2; n < size; ++n) lf[n] = lf[n - 1] + std::log(static_cast<double>(n));
  return lf;
}

// Rows hold conj(<m|z>) for each angle, so that (rows * C * rows2^T) is <z1 z2|psi>.
Eigen::MatrixXcd conj_amplitude_rows(SpinJ j, const std::vector<SphereAngle>& angles) {
  Eigen::MatrixXcd rows(static_cast<Eigen::Index>(angles.size()), j.dim());
  for (std::size_t r = 0; r < angles.size(); ++r) {
    rows.row(static_cast<Eigen::Index>(r)) = coherent_amps(j, angles[r]).amps.conjugate().transpose();
  }
  return rows;
}

struct SphereGrid {
  std::vector<SphereAngle> points;
  std::vector<double> weights;  // includes (2j+1)/(4 pi)
};

// Interior theta nodes only: the trapezoid weight carries sin(theta), which vanishes at the poles.
SphereGrid sphere_grid(SpinJ j, int n_theta, int n_phi) {
  SphereGrid g;
  const double dtheta = kPi / (n_theta - 1);
  const double dphi = 2.0 * kPi / n_phi;
  const double density = j.dim() / (4.0 * kPi);
  for (int i = 1; i + 1 < n_theta; ++i) {
    const double theta = i * dtheta;
    const double w = density * dtheta * std::sin(theta) * dphi;
    for (int p = 0; p < n_phi; ++p) {
      g.points.push_back({theta, p * dphi});
      g.weights.push_back(w);
    }
  }
  return g;
}

// Visits Q at every grid point pair, blocked so the N x N table is never stored.
template <typename Visit>
void for_each_q(const QuantumState& state, const SphereGrid& g, Visit&& visit) {
  const Eigen::MatrixXcd rows = conj_amplitude_rows(state.spin(), g.points);
  const Eigen::MatrixXcd left = rows * state.coefficient_matrix();
  const Eigen::MatrixXcd right = rows.transpose();
  const Eigen::Index n = rows.rows();
  constexpr Eigen::Index kBlock = 256;
  Eigen::MatrixXcd block;
  for (Eigen::Index r0 = 0; r0 < n; r0 += kBlock) {
    const Eigen::Index nr = std::min(kBlock, n - r0);
    block.noalias() = left.middleRows(r0, nr) * right;
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < nr; ++r) {
        visit(g.weights[static_cast<std::size_t>(r0 + r)] * g.weights[static_cast<std::size_t>(c)],
              std::norm(block(r, c)));
      }
    }
  }
}

void check_grid_sizes(int n_theta, int n_phi) {
  if (n_theta < 32 || n_phi < 32) {
    throw DomainError("Wehrl quadrature needs at least 32 points per angle");
  }
}

}  // namespace

void validate(const SphereAngle& a) {
  if (!(a.theta >= 0.0 && a.theta <= kPi) || !(a.phi >= 0.0 && a.phi < 2.0 * kPi)) {
    throw DomainError("angle out of range: theta=" + std::to_string(a.theta) +
                      " phi=" + std::to_string(a.phi));
  }
}

CoherentAmplitudes coherent_amps(SpinJ j, const SphereAngle& angle) {
  validate(angle);
  const int n = j.twice_j();
  static thread_local std::vector<double> lf;
  if (static_cast<int>(lf.size()) < n + 1) lf = log_factorials(std::max(n + 1, 128));
  const double c = std::cos(0.5 * angle.theta);
  const double s = std::sin(0.5 * angle.theta);
  CoherentAmplitudes out{j, Eigen::VectorXcd(j.dim())};
  for (int k = 0; k <= n; ++k) {
    const double binom = std::exp(0.5 * (lf[n] - lf[k] - lf[n - k]));
    const double mag = binom * std::pow(c, n - k) * std::pow(s, k);
    out.amps[k] = std::polar(mag, -k * angle.phi);
  }
  return out;
}

SphereAngle coherent_angle_of(const Vec3& l) {
  const double norm = std::sqrt(l[0] * l[0] + l[1] * l[1] + l[2] * l[2]);
  if (!(norm > 0.0)) throw DomainError("zero vector has no direction");
  const double theta = std::acos(std::clamp(-l[2] / norm, -1.0, 1.0));
  double phi = std::atan2(l[1], l[0]);
  if (phi < 0.0) phi += 2.0 * kPi;
  if (phi >= 2.0 * kPi) phi = 0.0;
  return {theta, phi};
}

double q_value(const QuantumState& state, const SphereAngle& a1, const SphereAngle& a2) {
  const Eigen::VectorXcd z1 = coherent_amps(state.spin(), a1).amps;
  const Eigen::VectorXcd z2 = coherent_amps(state.spin(), a2).amps;
  // Contract site 1 first, then site 2.
  const Eigen::RowVectorXcd partial = z1.adjoint() * state.coefficient_matrix();
  // |<z|psi>|^2 <= 1 exactly; clip the last-ulp rounding at a perfect overlap.
  return std::min(1.0, std::norm((partial.transpose().array() * z2.conjugate().array()).sum()));
}

QGrid q_cross_section(const QuantumState& state, double phi1, double phi2, int n_theta) {
  if (n_theta < 16) throw DomainError("cross-section needs n_theta >= 16");
  QGrid g;
  g.phi1 = phi1;
  g.phi2 = phi2;
  g.thetas.resize(static_cast<std::size_t>(n_theta));
  std::vector<SphereAngle> axis1;
  std::vector<SphereAngle> axis2;
  for (int i = 0; i < n_theta; ++i) {
    const double t = (i == n_theta - 1) ? kPi : kPi * i / (n_theta - 1);
    g.thetas[static_cast<std::size_t>(i)] = t;
    axis1.push_back({t, phi1});
    axis2.push_back({t, phi2});
  }
  const Eigen::MatrixXcd rows1 = conj_amplitude_rows(state.spin(), axis1);
  const Eigen::MatrixXcd rows2 = conj_amplitude_rows(state.spin(), axis2);
  const Eigen::MatrixXcd overlap = rows1 * state.coefficient_matrix() * rows2.transpose();
  g.values = overlap.cwiseAbs2().cwiseMin(1.0);
  return g;
}

std::vector<GridPeak> find_peaks(const QGrid& grid, double min_fraction) {
  const auto& v = grid.values;
  const double vmax = v.maxCoeff();
  std::vector<GridPeak> peaks;
  for (int i = 0; i < v.rows(); ++i) {
    for (int k = 0; k < v.cols(); ++k) {
      const double x = v(i, k);
      if (x < min_fraction * vmax) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        for (int dk = -1; dk <= 1 && is_max; ++dk) {
          const int ii = i + di;
          const int kk = k + dk;
          if ((di == 0 && dk == 0) || ii < 0 || kk < 0 || ii >= v.rows() || kk >= v.cols()) continue;
          is_max = x >= v(ii, kk);
        }
      }
      if (is_max) peaks.push_back({i, k, x});
    }
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const GridPeak& a, const GridPeak& b) { return a.value > b.value; });
  return peaks;
}

double q_normalization(const QuantumState& state, int n_theta, int n_phi) {
  check_grid_sizes(n_theta, n_phi);
  double total = 0.0;
  for_each_q(state, sphere_grid(state.spin(), n_theta, n_phi),
             [&](double w, double q) { total += w * q; });
  return total;
}

WehrlResult wehrl_entropy(const QuantumState& state, const WehrlOptions& opts) {
  check_grid_sizes(opts.n_theta, opts.n_phi);
  if (!(opts.order > 0.0)) throw DomainError("Renyi order must be positive");
  const bool shannon = opts.order == 1.0;
  double norm = 0.0;
  double acc = 0.0;
  for_each_q(state, sphere_grid(state.spin(), opts.n_theta, opts.n_phi), [&](double w, double q) {
    norm += w * q;
    if (shannon) {
      if (q > 0.0) acc -= w * q * std::log(q);
    } else {
      acc += w * std::pow(q, opts.order);
    }
  });
  if (std::abs(norm - 1.0) > opts.normalization_tol) {
    throw NormalizationError("Husimi normalization " + std::to_string(norm) +
                             " off by more than tolerance; refine the grid");
  }
  WehrlResult r;
  r.normalization = norm;
  r.nats = shannon ? acc : std::log(acc) / (1.0 - opts.order);
  r.bits = r.nats / std::numbers::ln2;
  return r;
}

QuantumState coherent_product(SpinJ j, const SphereAngle& a1, const SphereAngle& a2) {
  const Eigen::VectorXcd z1 = coherent_amps(j, a1).amps;
  const Eigen::VectorXcd z2 = coherent_amps(j, a2).amps;
  const int d = j.dim();
  Eigen::VectorXcd v(d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) v[a * d + b] = z1[a] * z2[b];
  }
  return QuantumState::normalized(j, std::move(v));
}

}  // namespace ctops
