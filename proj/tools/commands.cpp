#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctops/classical.hpp"
#include "ctops/eigensolver.hpp"
#include "ctops/entanglement.hpp"
#include "ctops/errors.hpp"
#include "ctops/hamiltonian.hpp"
#include "ctops/io.hpp"
#include "ctops/phase_space.hpp"
#include "ctops/version.hpp"

namespace ctops::cli {

namespace {

using nlohmann::ordered_json;
using io::format_double;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MuRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  bool scalar = true;

  std::vector<double> grid() const { return scalar ? std::vector<double>{lo} : make_grid(lo, hi, step); }
};

MuRange parse_mu(const std::string& text) {
  MuRange spec;
  try {
    const auto first = text.find(':');
    if (first == std::string::npos) {
      spec.lo = spec.hi = io::parse_double(text);
      if (!std::isfinite(spec.lo)) throw UsageError("--mu must be finite");
      return spec;
    }
    const auto second = text.find(':', first + 1);
    if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
      throw UsageError("--mu range must be lo:hi:step");
    }
    spec.scalar = false;
    spec.lo = io::parse_double(text.substr(0, first));
    spec.hi = io::parse_double(text.substr(first + 1, second - first - 1));
    spec.step = io::parse_double(text.substr(second + 1));
  } catch (const DomainError& e) {
    throw UsageError(std::string("--mu: ") + e.what());
  }
  if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi) || !(spec.step > 0.0) || spec.hi < spec.lo) {
    throw UsageError("--mu range '" + text + "' is empty or malformed");
  }
  return spec;
}

ClassicalState parse_state(const std::string& l1, const std::string& l2) {
  auto vec = [](const std::string& text) {
    std::stringstream ss(text);
    std::string cell;
    Vec3 v{};
    std::size_t i = 0;
    while (std::getline(ss, cell, ',')) {
      if (i >= 3) throw UsageError("vector '" + text + "' needs three components");
      v[i++] = io::parse_double(cell);
    }
    if (i != 3) throw UsageError("vector '" + text + "' needs three components");
    return v;
  };
  return {vec(l1), vec(l2)};
}

std::optional<Branch> parse_branch(const std::string& s) {
  for (Branch b : {Branch::RightRight, Branch::LeftLeft, Branch::RightLeft, Branch::LeftRight, Branch::A,
                   Branch::B, Branch::C, Branch::D}) {
    if (s == to_string(b)) return b;
  }
  if (s == "RR") return Branch::RightRight;
  if (s == "LL") return Branch::LeftLeft;
  if (s == "RL") return Branch::RightLeft;
  if (s == "LR") return Branch::LeftRight;
  return std::nullopt;
}

struct Output {
  std::string path;
  std::string format = "csv";
  bool timestamp = false;
};

// Shared metadata block; parameters are recorded as the text the user gave.
struct Metadata {
  std::vector<std::pair<std::string, std::string>> items;

  void add(const std::string& k, const std::string& v) { items.emplace_back(k, v); }
  void add(const std::string& k, double v) { add(k, format_double(v)); }
  void add(const std::string& k, int v) { add(k, std::to_string(v)); }
};

Metadata base_metadata(const std::string& command, const Output& o) {
  Metadata m;
  m.add("command", command);
  m.add("version", std::string(kVersion));
  m.add("format", o.format);
  if (o.timestamp) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    m.add("timestamp", std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now).count()));
  }
  return m;
}

void emit(std::ostream& out, const Output& o, const std::string& text) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + o.path + "'");
  f << text;
}

void emit_table(std::ostream& out, const Output& o, const Metadata& meta,
                const std::vector<std::string>& columns, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream ss;
  if (o.format == "csv") {
    io::Table t{meta.items, columns, rows};
    io::write_csv(ss, t);
  } else {
    ordered_json doc;
    doc["metadata"] = ordered_json::object();
    for (const auto& [k, v] : meta.items) doc["metadata"][k] = v;
    doc["records"] = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json rec;
      for (std::size_t i = 0; i < columns.size(); ++i) {
        // Numeric cells become JSON numbers; non-finite and text stay strings.
        try {
          const double x = io::parse_double(row[i]);
          rec[columns[i]] = std::isfinite(x) ? ordered_json(x) : ordered_json(row[i]);
        } catch (const DomainError&) {
          rec[columns[i]] = row[i];
        }
      }
      doc["records"].push_back(std::move(rec));
    }
    ss << doc.dump(2) << '\n';
  }
  emit(out, o, ss.str());
}

void require_twice_j(int twice_j) {
  if (twice_j < 1) throw UsageError("--twice-j must be >= 1");
}

void add_output_options(CLI::App* sub, Output& o, const std::string& default_format) {
  o.format = default_format;
  sub->add_option("--out", o.path, "Output file (default: stdout)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--timestamp", o.timestamp, "Record the wall-clock time in the metadata");
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

// entanglement-sweep --------------------------------------------------------

struct SweepArgs {
  int twice_j = 0;
  std::string mu;
  double tol = 1e-11;
  int threads = 1;
  Output out;
};

int cmd_entanglement_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  require_twice_j(a.twice_j);
  const MuRange mu = parse_mu(a.mu);
  SweepOptions opts;
  opts.solver.tol = a.tol;
  opts.threads = a.threads;
  const auto rows = sweep(SpinJ(a.twice_j), mu.grid(), opts);

  Metadata meta = base_metadata("entanglement-sweep", a.out);
  meta.add("twice_j", a.twice_j);
  meta.add("mu", a.mu);
  meta.add("tol", a.tol);
  meta.add("degeneracy_threshold", opts.solver.degeneracy_threshold);
  meta.add("degenerate_member", "swap-symmetric");

  std::vector<std::vector<std::string>> cells;
  std::size_t failures = 0;
  for (const auto& r : rows) {
    failures += r.failed ? 1 : 0;
    const double nan = std::nan("");
    cells.push_back({format_double(r.mu), format_double(r.failed ? nan : r.entropy_bits),
                     format_double(r.failed ? nan : r.ground_energy), format_double(r.failed ? nan : r.gap),
                     r.degenerate_flag ? "1" : "0", r.failed ? "failed: " + sanitize(r.error) : "ok"});
    if (r.failed) err << "mu=" << format_double(r.mu) << ": " << r.error << '\n';
  }
  emit_table(out, a.out, meta, {"mu", "entropy_bits", "ground_energy", "gap", "degenerate_flag", "status"},
             cells);
  return (!rows.empty() && failures == rows.size()) ? kNumericalFailure : kSuccess;
}

// critical-point ------------------------------------------------------------

struct CriticalArgs {
  std::vector<int> twice_j;
  double coarse_step = 0.01;
  double refine_tol = 1e-4;
  std::string window = "0.5:3.0";
  double tol = 1e-11;
  int threads = 1;
  Output out;
};

int cmd_critical_point(const CriticalArgs& a, std::ostream& out, std::ostream&) {
  if (a.twice_j.empty()) throw UsageError("--twice-j needs at least one value");
  for (int tj : a.twice_j) require_twice_j(tj);
  const auto colon = a.window.find(':');
  if (colon == std::string::npos) throw UsageError("--window must be lo:hi");
  PeakSearchOptions opts;
  try {
    opts.window_lo = io::parse_double(a.window.substr(0, colon));
    opts.window_hi = io::parse_double(a.window.substr(colon + 1));
  } catch (const DomainError& e) {
    throw UsageError(std::string("--window: ") + e.what());
  }
  if (!(opts.window_lo < opts.window_hi)) throw UsageError("--window is empty");
  if (!(a.coarse_step > 0.0 && a.coarse_step <= 0.05)) throw UsageError("--coarse-step must lie in (0, 0.05]");
  if (!(a.refine_tol > 0.0)) throw UsageError("--refine-tol must be positive");
  opts.coarse_step = a.coarse_step;
  opts.refine_tol = a.refine_tol;
  opts.sweep.solver.tol = a.tol;
  opts.sweep.threads = a.threads;

  Metadata meta = base_metadata("critical-point", a.out);
  meta.add("coarse_step", a.coarse_step);
  meta.add("refine_tol", a.refine_tol);
  meta.add("window", a.window);
  meta.add("tol", a.tol);

  std::vector<CriticalPointRecord> recs;
  for (int tj : a.twice_j) recs.push_back(find_mu_qc(SpinJ(tj), opts));

  if (a.out.format == "csv") {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : recs) {
      cells.push_back({std::to_string(r.j.twice_j()), r.has_peak ? "peak" : "no-peak", format_double(r.mu_qc),
                       format_double(r.s_max), format_double(r.mu_lo), format_double(r.mu_hi),
                       format_double(r.grid_step)});
    }
    emit_table(out, a.out, meta, {"twice_j", "status", "mu_qc", "S_max", "mu_lo", "mu_hi", "grid_step"}, cells);
    return kSuccess;
  }
  ordered_json doc;
  doc["metadata"] = ordered_json::object();
  for (const auto& [k, v] : meta.items) doc["metadata"][k] = v;
  doc["records"] = ordered_json::array();
  for (const auto& r : recs) {
    ordered_json rec;
    rec["twice_j"] = r.j.twice_j();
    rec["status"] = r.has_peak ? "peak" : "no-peak";
    if (r.has_peak) {
      rec["mu_qc"] = r.mu_qc;
      rec["S_max"] = r.s_max;
      rec["bracket"] = {r.mu_lo, r.mu_hi};
    } else {
      // Largest entropy in the window and where it sits (a window edge).
      rec["mu_qc"] = nullptr;
      rec["S_max"] = r.s_max;
      rec["bracket"] = nullptr;
      rec["edge_mu"] = r.mu_qc;
    }
    rec["grid_step"] = r.grid_step;
    doc["records"].push_back(std::move(rec));
  }
  emit(out, a.out, doc.dump(2) + "\n");
  return kSuccess;
}

// qfunction -----------------------------------------------------------------

struct QArgs {
  int twice_j = 0;
  double mu = 0.0;
  double phi1 = std::numbers::pi;
  double phi2 = std::numbers::pi;
  int resolution = 129;
  double tol = 1e-11;
  Output out;
};

int cmd_qfunction(const QArgs& a, std::ostream& out, std::ostream&) {
  require_twice_j(a.twice_j);
  if (a.resolution < 16) throw UsageError("--resolution must be >= 16");
  if (!std::isfinite(a.mu)) throw UsageError("--mu must be finite");
  for (double phi : {a.phi1, a.phi2}) {
    if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) throw UsageError("--phi1/--phi2 must lie in [0, 2 pi)");
  }
  const SpinJ j(a.twice_j);
  SolverOptions solver;
  solver.tol = a.tol;
  const EigenResult gs = ground_state(Hamiltonian(ModelParams{j, a.mu}), solver);
  const QuantumState psi(j, Eigen::VectorXd(gs.eigenvectors.col(0)));
  const QGrid grid = q_cross_section(psi, a.phi1, a.phi2, a.resolution);

  Metadata meta = base_metadata("qfunction", a.out);
  meta.add("twice_j", a.twice_j);
  meta.add("mu", a.mu);
  meta.add("phi1", a.phi1);
  meta.add("phi2", a.phi2);
  meta.add("resolution", a.resolution);
  meta.add("tol", a.tol);
  meta.add("ground_energy", gs.eigenvalues.front());
  meta.add("degenerate_flag", gs.quasi_degenerate ? 1 : 0);
  meta.add("layout", "rows theta1, columns theta2");

  std::vector<std::string> columns{"theta1"};
  for (double t : grid.thetas) columns.push_back(format_double(t));
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < grid.thetas.size(); ++i) {
    std::vector<std::string> row{format_double(grid.thetas[i])};
    for (Eigen::Index k = 0; k < grid.values.cols(); ++k) {
      row.push_back(format_double(grid.values(static_cast<Eigen::Index>(i), k)));
    }
    cells.push_back(std::move(row));
  }
  Output o = a.out;
  o.format = "csv";
  emit_table(out, o, meta, columns, cells);
  return kSuccess;
}

// spectrum ------------------------------------------------------------------

struct SpectrumArgs {
  int twice_j = 0;
  double mu = 0.0;
  Output out;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream&) {
  require_twice_j(a.twice_j);
  if (!std::isfinite(a.mu)) throw UsageError("--mu must be finite");
  const Hamiltonian h(ModelParams{SpinJ(a.twice_j), a.mu});
  const EigenResult spec = full_spectrum(h);
  Metadata meta = base_metadata("spectrum", a.out);
  meta.add("twice_j", a.twice_j);
  meta.add("mu", a.mu);
  meta.add("dim", h.dim());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    cells.push_back({std::to_string(i), format_double(spec.eigenvalues[i])});
  }
  emit_table(out, a.out, meta, {"index", "eigenvalue"}, cells);
  return kSuccess;
}

// wehrl-sweep ---------------------------------------------------------------

struct WehrlArgs {
  int twice_j = 0;
  std::string mu;
  int n_theta = 128;
  int n_phi = 128;
  double order = 1.0;
  double tol = 1e-11;
  Output out;
};

int cmd_wehrl_sweep(const WehrlArgs& a, std::ostream& out, std::ostream& err) {
  require_twice_j(a.twice_j);
  if (a.n_theta < 32 || a.n_phi < 32) throw UsageError("--n-theta and --n-phi must be >= 32");
  if (!(a.order > 0.0)) throw UsageError("--order must be positive");
  const MuRange mu = parse_mu(a.mu);
  const SpinJ j(a.twice_j);
  WehrlOptions wopts;
  wopts.n_theta = a.n_theta;
  wopts.n_phi = a.n_phi;
  wopts.order = a.order;
  SolverOptions solver;
  solver.tol = a.tol;

  Metadata meta = base_metadata("wehrl-sweep", a.out);
  meta.add("twice_j", a.twice_j);
  meta.add("mu", a.mu);
  meta.add("n_theta", a.n_theta);
  meta.add("n_phi", a.n_phi);
  meta.add("order", a.order);
  meta.add("tol", a.tol);

  std::vector<std::vector<std::string>> cells;
  std::size_t failures = 0;
  const double nan = std::nan("");
  const auto grid = mu.grid();
  for (double m : grid) {
    try {
      const EigenResult gs = ground_state(Hamiltonian(ModelParams{j, m}), solver);
      const QuantumState psi(j, Eigen::VectorXd(gs.eigenvectors.col(0)));
      const WehrlResult w = wehrl_entropy(psi, wopts);
      cells.push_back({format_double(m), format_double(w.nats), format_double(w.bits),
                       format_double(w.normalization), format_double(entanglement_entropy(psi)), "ok"});
    } catch (const Error& e) {
      ++failures;
      err << "mu=" << format_double(m) << ": " << e.what() << '\n';
      cells.push_back({format_double(m), format_double(nan), format_double(nan), format_double(nan),
                       format_double(nan), "failed: " + sanitize(e.what())});
    }
  }
  emit_table(out, a.out, meta, {"mu", "wehrl_nats", "wehrl_bits", "normalization", "entropy_bits", "status"},
             cells);
  return failures == grid.size() ? kNumericalFailure : kSuccess;
}

// classical -----------------------------------------------------------------

struct ClassicalArgs {
  std::string mu;
  std::string from = "A";
  std::string l1;
  std::string l2;
  double dt = 0.01;
  int steps = 10000;
  int every = 100;
  Output out;
};

double scalar_mu(const std::string& text) {
  const MuRange m = parse_mu(text);
  if (!m.scalar) throw UsageError("--mu must be a single value here");
  return m.lo;
}

int cmd_fixed_points(const ClassicalArgs& a, std::ostream& out, std::ostream&) {
  const double mu = scalar_mu(a.mu);
  if (mu < 0.0) throw UsageError("fixed-points needs --mu >= 0");
  const auto fps = enumerate_fixed_points(mu);
  Metadata meta = base_metadata("classical fixed-points", a.out);
  meta.add("mu", a.mu);
  std::vector<std::vector<std::string>> cells;
  for (const auto& fp : fps) {
    double max_re = 0.0;
    for (const auto& ev : fp.jacobian_eigenvalues) max_re = std::max(max_re, ev.real());
    const auto& c = fp.coords;
    cells.push_back({format_double(mu), to_string(fp.branch), format_double(c.l1[0]), format_double(c.l1[1]),
                     format_double(c.l1[2]), format_double(c.l2[0]), format_double(c.l2[1]), format_double(c.l2[2]),
                     format_double(classical_energy(c, mu)), to_string(fp.stability), format_double(max_re)});
  }
  emit_table(out, a.out, meta,
             {"mu", "branch", "Lx1", "Ly1", "Lz1", "Lx2", "Ly2", "Lz2", "energy", "stability", "max_re_eigenvalue"},
             cells);
  return kSuccess;
}

int cmd_bifurcation(const ClassicalArgs& a, std::ostream& out, std::ostream&) {
  const MuRange m = parse_mu(a.mu);
  if (m.lo < 0.0) throw UsageError("bifurcation needs --mu >= 0");
  std::vector<BifurcationRow> rows;
  if (m.scalar) {
    for (const auto& fp : enumerate_fixed_points(m.lo)) {
      rows.push_back({m.lo, fp.branch, fp.coords.l1[2], fp.coords.l1[0], fp.stability});
    }
  } else {
    const auto grid = m.grid();
    if (grid.size() < 2) {
      for (const auto& fp : enumerate_fixed_points(grid.front())) {
        rows.push_back({grid.front(), fp.branch, fp.coords.l1[2], fp.coords.l1[0], fp.stability});
      }
    } else {
      for (double mu : grid) {
        for (const auto& fp : enumerate_fixed_points(mu)) {
          rows.push_back({mu, fp.branch, fp.coords.l1[2], fp.coords.l1[0], fp.stability});
        }
      }
    }
  }
  Metadata meta = base_metadata("classical bifurcation", a.out);
  meta.add("mu", a.mu);
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({format_double(r.mu), to_string(r.branch), format_double(r.lz1), format_double(r.lx1),
                     to_string(r.stability)});
  }
  emit_table(out, a.out, meta, {"mu", "branch", "Lz1", "Lx1", "stability"}, cells);
  return kSuccess;
}

int cmd_evolve(const ClassicalArgs& a, std::ostream& out, std::ostream&) {
  const double mu = scalar_mu(a.mu);
  if (a.steps < 0 || a.every < 1 || !(a.dt > 0.0)) throw UsageError("evolve needs --dt > 0, --steps >= 0, --every >= 1");
  ClassicalState s0;
  if (!a.l1.empty() || !a.l2.empty()) {
    if (a.l1.empty() || a.l2.empty()) throw UsageError("--l1 and --l2 must be given together");
    s0 = parse_state(a.l1, a.l2);
  } else {
    const auto branch = parse_branch(a.from);
    if (!branch) throw UsageError("unknown fixed point '" + a.from + "'");
    bool found = false;
    for (const auto& fp : enumerate_fixed_points(std::max(mu, 0.0))) {
      if (fp.branch == *branch) {
        s0 = fp.coords;
        found = true;
      }
    }
    if (!found) throw UsageError("fixed point '" + a.from + "' does not exist at this mu");
  }
  const Trajectory traj = integrate(s0, mu, a.dt, a.steps);
  Metadata meta = base_metadata("classical evolve", a.out);
  meta.add("mu", a.mu);
  meta.add("from", (!a.l1.empty()) ? std::string("custom") : a.from);
  meta.add("dt", a.dt);
  meta.add("steps", a.steps);
  meta.add("every", a.every);
  meta.add("max_energy_drift", traj.max_energy_drift);
  meta.add("max_constraint_drift", traj.max_constraint_drift);
  std::vector<std::vector<std::string>> cells;
  for (std::size_t i = 0; i < traj.states.size(); i += static_cast<std::size_t>(a.every)) {
    const auto& s = traj.states[i];
    cells.push_back({format_double(static_cast<double>(i) * a.dt), format_double(s.l1[0]), format_double(s.l1[1]),
                     format_double(s.l1[2]), format_double(s.l2[0]), format_double(s.l2[1]), format_double(s.l2[2]),
                     format_double(classical_energy(s, mu))});
  }
  emit_table(out, a.out, meta, {"t", "Lx1", "Ly1", "Lz1", "Lx2", "Ly2", "Lz2", "energy"}, cells);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coupled giant-spin simulations: entanglement, Husimi functions, classical fixed points", "ctops"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("entanglement-sweep", "Ground-state entanglement over a coupling range");
  sweep_cmd->add_option("--twice-j", sweep_args.twice_j, "2j (integer)")->required();
  sweep_cmd->add_option("--mu", sweep_args.mu, "lo:hi:step or a single value")->required();
  sweep_cmd->add_option("--tol", sweep_args.tol, "Eigenpair residual tolerance");
  sweep_cmd->add_option("--threads", sweep_args.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_output_options(sweep_cmd, sweep_args.out, "csv");

  CriticalArgs crit_args;
  auto* crit_cmd = app.add_subcommand("critical-point", "Coupling of maximal ground-state entanglement");
  crit_cmd->add_option("--twice-j", crit_args.twice_j, "Comma-separated list of 2j")->required()->delimiter(',');
  crit_cmd->add_option("--coarse-step", crit_args.coarse_step, "Coarse scan step (<= 0.05)");
  crit_cmd->add_option("--refine-tol", crit_args.refine_tol, "Final bracket width");
  crit_cmd->add_option("--window", crit_args.window, "Scan window lo:hi");
  crit_cmd->add_option("--tol", crit_args.tol, "Eigenpair residual tolerance");
  crit_cmd->add_option("--threads", crit_args.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_output_options(crit_cmd, crit_args.out, "json");

  QArgs q_args;
  auto* q_cmd = app.add_subcommand("qfunction", "Ground-state Husimi cross-section at fixed azimuths");
  q_cmd->add_option("--twice-j", q_args.twice_j, "2j (integer)")->required();
  q_cmd->add_option("--mu", q_args.mu, "Coupling")->required();
  q_cmd->add_option("--phi1", q_args.phi1, "Azimuth of site 1 (radians)");
  q_cmd->add_option("--phi2", q_args.phi2, "Azimuth of site 2 (radians)");
  q_cmd->add_option("--resolution", q_args.resolution, "Theta points per axis (>= 16)");
  q_cmd->add_option("--tol", q_args.tol, "Eigenpair residual tolerance");
  q_cmd->add_option("--out", q_args.out.path, "Output file (default: stdout)");
  q_cmd->add_flag("--timestamp", q_args.out.timestamp, "Record the wall-clock time in the metadata");

  SpectrumArgs spec_args;
  auto* spec_cmd = app.add_subcommand("spectrum", "Full spectrum of the dense Hamiltonian");
  spec_cmd->add_option("--twice-j", spec_args.twice_j, "2j (integer)")->required();
  spec_cmd->add_option("--mu", spec_args.mu, "Coupling")->required();
  add_output_options(spec_cmd, spec_args.out, "csv");

  WehrlArgs wehrl_args;
  auto* wehrl_cmd = app.add_subcommand("wehrl-sweep", "Wehrl entropy of the ground state over a coupling range");
  wehrl_cmd->add_option("--twice-j", wehrl_args.twice_j, "2j (integer)")->required();
  wehrl_cmd->add_option("--mu", wehrl_args.mu, "lo:hi:step or a single value")->required();
  wehrl_cmd->add_option("--n-theta", wehrl_args.n_theta, "Theta nodes per sphere (>= 32)");
  wehrl_cmd->add_option("--n-phi", wehrl_args.n_phi, "Phi nodes per sphere (>= 32)");
  wehrl_cmd->add_option("--order", wehrl_args.order, "Renyi order (1 = Wehrl)");
  wehrl_cmd->add_option("--tol", wehrl_args.tol, "Eigenpair residual tolerance");
  add_output_options(wehrl_cmd, wehrl_args.out, "csv");

  ClassicalArgs cl_args;
  auto* cl_cmd = app.add_subcommand("classical", "Classical limit: fixed points, bifurcation table, trajectories");
  cl_cmd->require_subcommand(1);
  auto* fp_cmd = cl_cmd->add_subcommand("fixed-points", "All fixed points with stability");
  fp_cmd->add_option("--mu", cl_args.mu, "Coupling")->required();
  add_output_options(fp_cmd, cl_args.out, "csv");
  auto* bif_cmd = cl_cmd->add_subcommand("bifurcation", "Fixed-point branches over a coupling range");
  bif_cmd->add_option("--mu", cl_args.mu, "lo:hi:step")->required();
  add_output_options(bif_cmd, cl_args.out, "csv");
  auto* ev_cmd = cl_cmd->add_subcommand("evolve", "RK4 trajectory");
  ev_cmd->add_option("--mu", cl_args.mu, "Coupling")->required();
  ev_cmd->add_option("--from", cl_args.from, "Start at a fixed point: A B C D RR LL RL LR");
  ev_cmd->add_option("--l1", cl_args.l1, "Custom start L1 as x,y,z");
  ev_cmd->add_option("--l2", cl_args.l2, "Custom start L2 as x,y,z");
  ev_cmd->add_option("--dt", cl_args.dt, "Step size");
  ev_cmd->add_option("--steps", cl_args.steps, "Number of steps");
  ev_cmd->add_option("--every", cl_args.every, "Write every n-th state");
  add_output_options(ev_cmd, cl_args.out, "csv");

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  if (storage.empty()) storage.emplace_back("ctops");
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success&) {
    out << (app.get_help_ptr()->count() ? app.help() : std::string(kVersion) + "\n");
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sweep_cmd->parsed()) return cmd_entanglement_sweep(sweep_args, out, err);
    if (crit_cmd->parsed()) return cmd_critical_point(crit_args, out, err);
    if (q_cmd->parsed()) return cmd_qfunction(q_args, out, err);
    if (spec_cmd->parsed()) return cmd_spectrum(spec_args, out, err);
    if (wehrl_cmd->parsed()) return cmd_wehrl_sweep(wehrl_args, out, err);
    if (fp_cmd->parsed()) return cmd_fixed_points(cl_args, out, err);
    if (bif_cmd->parsed()) return cmd_bifurcation(cl_args, out, err);
    if (ev_cmd->parsed()) return cmd_evolve(cl_args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsage;
}

}  // namespace ctops::cli
