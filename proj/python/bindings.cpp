#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctops/classical.hpp"
#include "ctops/eigensolver.hpp"
#include "ctops/entanglement.hpp"
#include "ctops/errors.hpp"
#include "ctops/hamiltonian.hpp"
#include "ctops/phase_space.hpp"
#include "ctops/version.hpp"

namespace py = pybind11;
using namespace ctops;

namespace {

QuantumState state_from(int twice_j, const Eigen::VectorXcd& amps) { return QuantumState(SpinJ(twice_j), amps); }

SolverOptions solver(double tol) {
  SolverOptions o;
  o.tol = tol;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coupled giant spins: exact diagonalization, entanglement, Husimi functions, classical limit";
  m.attr("__version__") = std::string(kVersion);

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", base.ptr());

  m.def(
      "hamiltonian",
      [](int twice_j, double mu) { return Hamiltonian(ModelParams{SpinJ(twice_j), mu}).dense(); },
      py::arg("twice_j"), py::arg("mu"), "Dense Hamiltonian matrix.");
  m.def(
      "apply_hamiltonian",
      [](int twice_j, double mu, const Eigen::VectorXd& v) { return Hamiltonian(ModelParams{SpinJ(twice_j), mu}).apply(v); },
      py::arg("twice_j"), py::arg("mu"), py::arg("v"));
  m.def(
      "ground_state",
      [](int twice_j, double mu, double tol) {
        const EigenResult r = ground_state(Hamiltonian(ModelParams{SpinJ(twice_j), mu}), solver(tol));
        py::dict d;
        d["energy"] = r.eigenvalues.front();
        d["vector"] = Eigen::VectorXd(r.eigenvectors.col(0));
        d["gap"] = r.gap;
        d["residual"] = r.residual_norm;
        d["quasi_degenerate"] = r.quasi_degenerate;
        return d;
      },
      py::arg("twice_j"), py::arg("mu"), py::arg("tol") = 1e-11);
  m.def(
      "spectrum", [](int twice_j, double mu) { return full_spectrum(Hamiltonian(ModelParams{SpinJ(twice_j), mu})).eigenvalues; },
      py::arg("twice_j"), py::arg("mu"));
  m.def(
      "entanglement_entropy",
      [](int twice_j, const Eigen::VectorXcd& amps) { return entanglement_entropy(state_from(twice_j, amps)); },
      py::arg("twice_j"), py::arg("amplitudes"), "Entropy of entanglement in bits.");
  m.def(
      "entanglement_sweep",
      [](int twice_j, const std::vector<double>& mus, int threads) {
        SweepOptions o;
        o.threads = threads;
        py::list out;
        for (const auto& r : sweep(SpinJ(twice_j), mus, o)) {
          py::dict d;
          d["mu"] = r.mu;
          d["entropy_bits"] = r.entropy_bits;
          d["ground_energy"] = r.ground_energy;
          d["gap"] = r.gap;
          d["degenerate_flag"] = r.degenerate_flag;
          d["failed"] = r.failed;
          d["error"] = r.error;
          out.append(d);
        }
        return out;
      },
      py::arg("twice_j"), py::arg("mus"), py::arg("threads") = 1);
  m.def(
      "find_mu_qc",
      [](int twice_j, double coarse_step, double refine_tol) {
        PeakSearchOptions o;
        o.coarse_step = coarse_step;
        o.refine_tol = refine_tol;
        const auto r = find_mu_qc(SpinJ(twice_j), o);
        py::dict d;
        d["has_peak"] = r.has_peak;
        d["mu_qc"] = r.mu_qc;
        d["S_max"] = r.s_max;
        d["bracket"] = py::make_tuple(r.mu_lo, r.mu_hi);
        return d;
      },
      py::arg("twice_j"), py::arg("coarse_step") = 0.01, py::arg("refine_tol") = 1e-4);
  m.def(
      "coherent_amps",
      [](int twice_j, double theta, double phi) { return coherent_amps(SpinJ(twice_j), {theta, phi}).amps; },
      py::arg("twice_j"), py::arg("theta"), py::arg("phi"));
  m.def(
      "q_cross_section",
      [](int twice_j, const Eigen::VectorXcd& amps, double phi1, double phi2, int n_theta) {
        const QGrid g = q_cross_section(state_from(twice_j, amps), phi1, phi2, n_theta);
        return py::make_tuple(g.thetas, g.values);
      },
      py::arg("twice_j"), py::arg("amplitudes"), py::arg("phi1"), py::arg("phi2"), py::arg("n_theta") = 129);
  m.def(
      "wehrl_entropy",
      [](int twice_j, const Eigen::VectorXcd& amps, int n_theta, int n_phi, double order) {
        WehrlOptions o;
        o.n_theta = n_theta;
        o.n_phi = n_phi;
        o.order = order;
        const auto r = wehrl_entropy(state_from(twice_j, amps), o);
        return py::make_tuple(r.nats, r.normalization);
      },
      py::arg("twice_j"), py::arg("amplitudes"), py::arg("n_theta") = 128, py::arg("n_phi") = 128,
      py::arg("order") = 1.0, "Wehrl entropy in nats and the quadrature normalization.");
  m.def(
      "fixed_points",
      [](double mu) {
        py::list out;
        for (const auto& fp : enumerate_fixed_points(mu)) {
          py::dict d;
          d["branch"] = to_string(fp.branch);
          d["l1"] = fp.coords.l1;
          d["l2"] = fp.coords.l2;
          d["stability"] = to_string(fp.stability);
          out.append(d);
        }
        return out;
      },
      py::arg("mu"));
  m.def(
      "integrate",
      [](const Vec3& l1, const Vec3& l2, double mu, double dt, int steps) {
        const Trajectory t = integrate({l1, l2}, mu, dt, steps);
        Eigen::MatrixXd states(static_cast<Eigen::Index>(t.states.size()), 6);
        for (std::size_t i = 0; i < t.states.size(); ++i) {
          for (int k = 0; k < 3; ++k) {
            states(static_cast<Eigen::Index>(i), k) = t.states[i].l1[static_cast<std::size_t>(k)];
            states(static_cast<Eigen::Index>(i), 3 + k) = t.states[i].l2[static_cast<std::size_t>(k)];
          }
        }
        return py::make_tuple(states, t.max_energy_drift, t.max_constraint_drift);
      },
      py::arg("l1"), py::arg("l2"), py::arg("mu"), py::arg("dt"), py::arg("steps"));
}
