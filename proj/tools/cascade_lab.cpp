// cascade_lab: command-line front end for the cascade-emission spectral
// library. Subcommands mirror the quantities of interest: joint spectrum,
// Schmidt data, geometry factor, swapping/PME/teleportation metrics, and the
// closed-form vs Fock-oracle cross-check.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <cascade/errors.hpp>
#include <cascade/fock.hpp>
#include <cascade/parallel.hpp>
#include <cascade/protocol.hpp>
#include <cascade/schmidt.hpp>
#include <cascade/spectral.hpp>

namespace {

using cascade::DetectorKind;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;

/// Collects rows and the resolved configuration, then writes CSV (header +
/// config comment) or JSON lines (config object first).
struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::pair<std::string, std::string>> config;

  void set(const std::string& k, const std::string& v) { config.emplace_back(k, v); }
  void set(const std::string& k, double v) { config.emplace_back(k, fmt(v)); }

  void write(std::ostream& os, const std::string& format) const {
    if (format == "csv") {
      std::string cfg = "# config:";
      for (const auto& [k, v] : config) cfg += " " + k + "=" + v;
      os << cfg << "\n";
      for (std::size_t c = 0; c < columns.size(); ++c)
        os << (c ? "," : "") << columns[c];
      os << "\n";
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (c) os << ",";
          if (const double* d = std::get_if<double>(&row[c]))
            os << fmt(*d);
          else
            os << std::get<std::string>(row[c]);
        }
        os << "\n";
      }
    } else {
      nlohmann::ordered_json jc;
      for (const auto& [k, v] : config) jc[k] = v;
      os << nlohmann::ordered_json{{"config", jc}}.dump() << "\n";
      for (const auto& row : rows) {
        nlohmann::ordered_json jr;
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (const double* d = std::get_if<double>(&row[c]))
            jr[columns[c]] = *d;
          else
            jr[columns[c]] = std::get<std::string>(row[c]);
        }
        os << jr.dump() << "\n";
      }
    }
  }
};

struct Sweep {
  std::string variable;
  double start = 0.0, stop = 0.0;
  int points = 0;

  double at(int i) const {
    return points < 2 ? start : start + (stop - start) * i / double(points - 1);
  }
};

Sweep parse_sweep(const std::string& spec, const std::vector<std::string>& allowed) {
  Sweep s;
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw cascade::invalid_parameter("sweep spec must be var=start:stop:points");
  s.variable = spec.substr(0, eq);
  bool ok = false;
  for (const auto& a : allowed) ok = ok || a == s.variable;
  if (!ok) throw cascade::invalid_parameter("sweep variable '" + s.variable + "' not supported here");
  char colon1 = 0, colon2 = 0;
  std::istringstream iss(spec.substr(eq + 1));
  if (!(iss >> s.start >> colon1 >> s.stop >> colon2 >> s.points) || colon1 != ':' ||
      colon2 != ':')
    throw cascade::invalid_parameter("sweep spec must be var=start:stop:points");
  if (s.points < 2) throw cascade::invalid_parameter("sweep needs at least 2 points");
  if (!(s.start < s.stop)) throw cascade::invalid_parameter("sweep bounds must be ordered");
  return s;
}

std::vector<double> parse_lambdas(const std::string& spec) {
  std::vector<double> out;
  std::istringstream iss(spec);
  std::string tok;
  while (std::getline(iss, tok, ',')) out.push_back(std::stod(tok));
  double sum = 0.0;
  for (double l : out) {
    if (l < 0.0) throw cascade::invalid_parameter("Schmidt weights must be non-negative");
    sum += l;
  }
  if (out.empty() || std::abs(sum - 1.0) > 1e-6)
    throw cascade::invalid_parameter("Schmidt weights must sum to 1");
  return out;
}

struct CommonOpts {
  double tau = 0.25;
  double srfactor = 5.0;
  double grid_extent = 1200.0;
  int grid_panels = 300;  // 4-point panels per axis -> node cap
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o, bool physics = true) {
  if (physics) {
    cmd->add_option("--tau", o.tau, "Pump pulse width (units 1/Gamma3)")->check(CLI::PositiveNumber);
    cmd->add_option("--srfactor", o.srfactor, "Superradiant factor N*mu+1")
        ->check(CLI::Range(1.0, 1e9));
    cmd->add_option("--grid-extent", o.grid_extent, "Frequency grid half-range (units Gamma3)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--grid-panels", o.grid_panels,
                    "Cap on 4-point quadrature panels per frequency axis")
        ->check(CLI::Range(2, 100000));
  }
  cmd->add_option("--out", o.out, "Output path (default stdout)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

void emit(const Table& t, const CommonOpts& o) {
  if (o.out.empty()) {
    t.write(std::cout, o.format);
    return;
  }
  std::ofstream os(o.out, std::ios::binary);
  if (!os) throw cascade::invalid_parameter("cannot open output path " + o.out);
  t.write(os, o.format);
}

cascade::SchmidtDecomposition spectrum_for(const CommonOpts& o, const std::string& lambdas) {
  if (!lambdas.empty())
    return cascade::SchmidtDecomposition::from_eigenvalues(parse_lambdas(lambdas));
  cascade::EnsembleParams p;
  p.tau = o.tau;
  p.superradiant_factor = o.srfactor;
  auto g = cascade::default_grid(p, o.grid_extent, 4u * static_cast<unsigned>(o.grid_panels));
  return cascade::decompose(cascade::joint_amplitude(p, g, g));
}

void run_spectrum(const CommonOpts& o) {
  cascade::EnsembleParams p;
  p.tau = o.tau;
  p.superradiant_factor = o.srfactor;
  auto g = cascade::FrequencyGrid::trapezoid(o.grid_extent, 2u * static_cast<unsigned>(o.grid_panels) + 1);
  auto amp = cascade::joint_amplitude(p, g, g);

  Table t;
  t.columns = {"omega_s", "omega_i", "abs_f"};
  t.set("command", "spectrum");
  t.set("tau", o.tau);
  t.set("srfactor", o.srfactor);
  t.set("grid_extent", o.grid_extent);
  t.set("grid_panels", double(o.grid_panels));
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t k = 0; k < g.size(); ++k)
      t.rows.push_back({g.nodes()[j], g.nodes()[k], std::abs(amp.values(j, k))});
  emit(t, o);
}

void run_schmidt(const CommonOpts& o, const std::string& modes_path, int nmodes) {
  auto d = spectrum_for(o, "");
  Table t;
  t.columns = {"n", "lambda_n"};
  t.set("command", "schmidt");
  t.set("tau", o.tau);
  t.set("srfactor", o.srfactor);
  t.set("grid_extent", o.grid_extent);
  t.set("grid_panels", double(o.grid_panels));
  t.set("entropy_nats", d.entropy_nats);
  t.set("entropy_bits", d.entropy_bits);
  t.set("purity", d.purity);
  t.set("rank", double(d.rank));
  for (int n = 1; n <= d.rank; ++n) t.rows.push_back({double(n), d.eigenvalues[n - 1]});
  emit(t, o);

  if (!modes_path.empty()) {
    Table tm;
    tm.columns = {"omega", "re", "im", "n", "side"};
    tm.set("command", "schmidt-modes");
    tm.set("tau", o.tau);
    tm.set("srfactor", o.srfactor);
    const int top = std::min(nmodes, d.rank);
    for (int n = 1; n <= top; ++n) {
      for (auto side : {cascade::KernelSide::signal, cascade::KernelSide::idler}) {
        auto prof = cascade::mode_profile(d, n, side);
        const char* name = side == cascade::KernelSide::signal ? "signal" : "idler";
        for (Eigen::Index j = 0; j < prof.values.size(); ++j)
          tm.rows.push_back({prof.nodes[j], prof.values[j].real(), prof.values[j].imag(),
                             double(n), std::string(name)});
      }
    }
    CommonOpts om = o;
    om.out = modes_path;
    emit(tm, om);
  }
}

void run_gfactor(const CommonOpts& o, double H, double A, long N, const std::string& sweep) {
  Table t;
  t.columns = {"H", "A", "N", "mu_bar", "srfactor"};
  t.set("command", "gfactor");
  t.set("H", H);
  t.set("A", A);
  t.set("N", double(N));
  if (!sweep.empty()) t.set("sweep", sweep);

  std::vector<std::pair<double, double>> pts;  // (H, A)
  if (sweep.empty()) {
    pts.emplace_back(H, A);
  } else {
    Sweep s = parse_sweep(sweep, {"H", "A"});
    for (int i = 0; i < s.points; ++i)
      pts.emplace_back(s.variable == "H" ? s.at(i) : H, s.variable == "A" ? s.at(i) : A);
  }
  std::vector<double> mu(pts.size());
  cascade::parallel_for(pts.size(), [&](std::size_t i) {
    mu[i] = cascade::geometric_factor({pts[i].first, pts[i].second, N});
  });
  for (std::size_t i = 0; i < pts.size(); ++i)
    t.rows.push_back({pts[i].first, pts[i].second, double(N), mu[i], N * mu[i] + 1.0});
  emit(t, o);
}

struct ProtoOpts {
  double eta_r = 1.0;
  double eta_t = 1.0;
  std::string detector = "both";
  std::string lambdas;
  std::string sweep;
  double d0 = 1.0 / std::numbers::sqrt2;
};

void add_proto(CLI::App* cmd, ProtoOpts& p, bool detector_choice) {
  cmd->add_option("--eta-r", p.eta_r, "Efficiency ratio eta1/eta2")->check(CLI::PositiveNumber);
  cmd->add_option("--eta-t", p.eta_t, "Telecom detector efficiency")->check(CLI::Range(0.0, 1.0));
  if (detector_choice)
    cmd->add_option("--detector", p.detector, "Detector kind")
        ->check(CLI::IsMember({"nrpd", "pnrd", "both"}));
  cmd->add_option("--lambdas", p.lambdas,
                  "Comma-separated Schmidt weights overriding the tau/srfactor spectrum");
}

void set_proto_config(Table& t, const CommonOpts& o, const ProtoOpts& p) {
  if (p.lambdas.empty()) {
    t.set("tau", o.tau);
    t.set("srfactor", o.srfactor);
  } else {
    t.set("lambdas", p.lambdas);
  }
  if (!p.sweep.empty()) t.set("sweep", p.sweep);
}

void run_swap(const CommonOpts& o, const ProtoOpts& p) {
  auto d = spectrum_for(o, p.lambdas);
  Table t;
  t.columns = {"eta_r", "eta_t", "detector", "F", "P_H", "P_S"};
  t.set("command", "swap");
  set_proto_config(t, o, p);
  t.set("eta_r", p.eta_r);
  t.set("eta_t", p.eta_t);
  t.set("detector", p.detector);

  std::vector<std::pair<double, double>> pts;  // (eta_r, eta_t)
  if (p.sweep.empty()) {
    pts.emplace_back(p.eta_r, p.eta_t);
  } else {
    Sweep s = parse_sweep(p.sweep, {"eta_r", "eta_t"});
    for (int i = 0; i < s.points; ++i)
      pts.emplace_back(s.variable == "eta_r" ? s.at(i) : p.eta_r,
                       s.variable == "eta_t" ? s.at(i) : p.eta_t);
  }
  std::vector<DetectorKind> kinds;
  if (p.detector != "pnrd") kinds.push_back(DetectorKind::nrpd);
  if (p.detector != "nrpd") kinds.push_back(DetectorKind::pnrd);

  std::vector<Row> rows(pts.size() * kinds.size());
  cascade::parallel_for(rows.size(), [&](std::size_t i) {
    const auto [er, et] = pts[i / kinds.size()];
    const DetectorKind kind = kinds[i % kinds.size()];
    auto m = cascade::swap_metrics(d, {kind, et, 1.0}, {er, {}});
    rows[i] = {er, et, std::string(kind == DetectorKind::nrpd ? "nrpd" : "pnrd"),
               m.fidelity, m.heralding, m.success};
  });
  t.rows = std::move(rows);
  emit(t, o);
}

void run_pme(const CommonOpts& o, const ProtoOpts& p) {
  auto d = spectrum_for(o, p.lambdas);
  Table t;
  t.columns = {"eta_r", "eta_t", "P_S_PME", "c0"};
  t.set("command", "pme");
  set_proto_config(t, o, p);
  t.set("eta_r", p.eta_r);
  t.set("eta_t", p.eta_t);

  std::vector<std::pair<double, double>> pts;
  if (p.sweep.empty()) {
    pts.emplace_back(p.eta_r, p.eta_t);
  } else {
    Sweep s = parse_sweep(p.sweep, {"eta_r", "eta_t"});
    for (int i = 0; i < s.points; ++i)
      pts.emplace_back(s.variable == "eta_r" ? s.at(i) : p.eta_r,
                       s.variable == "eta_t" ? s.at(i) : p.eta_t);
  }
  for (const auto [er, et] : pts) {
    cascade::DetectorModel det{DetectorKind::nrpd, et, 1.0};
    cascade::SwapConfig cfg{er, {}};
    t.rows.push_back({er, et, cascade::pme_success(d, det, cfg),
                      cascade::vacuum_coefficient(det, cfg, d)});
  }
  emit(t, o);
}

void run_teleport(const CommonOpts& o, const ProtoOpts& p) {
  auto d = spectrum_for(o, p.lambdas);
  Table t;
  t.columns = {"d0", "P_S_QT", "F1", "P1"};
  t.set("command", "teleport");
  set_proto_config(t, o, p);
  t.set("eta_r", p.eta_r);
  t.set("eta_t", p.eta_t);
  t.set("d0", p.d0);

  std::vector<double> pts;
  if (p.sweep.empty()) {
    pts.push_back(p.d0);
  } else {
    Sweep s = parse_sweep(p.sweep, {"d0"});
    for (int i = 0; i < s.points; ++i) pts.push_back(s.at(i));
  }
  for (double d0 : pts)
    if (d0 < 0.0 || d0 > 1.0) throw cascade::invalid_parameter("|d0| must lie in [0,1]");
  cascade::DetectorModel det{DetectorKind::nrpd, p.eta_t, 1.0};
  cascade::SwapConfig cfg{p.eta_r, {}};
  std::vector<Row> rows(pts.size());
  cascade::parallel_for(pts.size(), [&](std::size_t i) {
    const double d0 = pts[i];
    cascade::TeleportInput q{d0, std::sqrt(std::max(0.0, 1.0 - d0 * d0))};
    const double ps = cascade::teleport_success(d, det, cfg, q);
    const auto [f1, p1] = cascade::teleport_conditional_density_metrics(d, det, cfg, q);
    rows[i] = {d0, ps, f1, p1};
  });
  t.rows = std::move(rows);
  emit(t, o);
}

// Closed-form metrics vs the truncated-Fock detection oracle. eta2 is held
// small and eta1 is chosen so the effective cascade/Raman ratio equals the
// requested eta_r exactly.
void run_oracle_check(const CommonOpts& o) {
  struct Case {
    std::string network, detector;
    double eta_r, eta_t;
    std::string metric;
    double closed, oracle;
  };
  std::vector<Case> cases;
  const double eta2 = 0.1;
  const auto eta1_for = [&](double eta_r) { return eta_r * eta2 / (1.0 - eta2 + eta_r * eta2); };

  const std::vector<double> lams{0.8, 0.2};
  auto d2 = cascade::SchmidtDecomposition::from_eigenvalues(lams);
  for (double er : {0.25, 0.5, 1.0})
    for (double et : {0.5, 0.8, 1.0})
      for (bool pnrd : {false, true}) {
        Case base;
        base.network = "swap";
        base.detector = pnrd ? "pnrd" : "nrpd";
        base.eta_r = er;
        base.eta_t = et;
        for (const char* m : {"F", "P_H", "P_S"}) {
          base.metric = m;
          cases.push_back(base);
        }
      }
  const std::size_t nswap = cases.size();
  for (double er : {1e-6, 0.5, 1.0})
    for (int rank : {1, 2})
      cases.push_back({"pme", "nrpd", er, 1.0, rank == 1 ? "P_S_PME:pure" : "P_S_PME", 0, 0});
  cases.push_back({"teleport", "nrpd", 1e-6, 1.0, "P_S_QT:pure:d0=0.3", 0, 0});
  cases.push_back({"teleport", "nrpd", 0.5, 1.0, "P_S_QT:d0=0.6", 0, 0});
  cases.push_back({"teleport", "nrpd", 1.0, 1.0, "P_S_QT:d0=0", 0, 0});

  cascade::parallel_for(cases.size(), [&](std::size_t i) {
    Case& c = cases[i];
    cascade::fock::NetworkParams np;
    np.eta2 = eta2;
    np.eta1 = eta1_for(c.eta_r);
    np.eta_t = c.eta_t;
    cascade::SwapConfig cfg{c.eta_r, {}};
    cascade::DetectorModel det{c.detector == "pnrd" ? DetectorKind::pnrd : DetectorKind::nrpd,
                               c.eta_t, 1.0};
    if (c.network == "swap") {
      np.eta_eff = 0.7;
      np.lams = lams;
      np.pnrd = c.detector == "pnrd";
      auto om = cascade::fock::run_network(cascade::fock::Network::swap, np);
      auto cm = cascade::swap_metrics(d2, det, cfg);
      if (c.metric == "F") {
        c.closed = cm.fidelity;
        c.oracle = om.fidelity;
      } else if (c.metric == "P_H") {
        c.closed = cm.heralding;
        c.oracle = om.heralding;
      } else {
        c.closed = cm.success;
        c.oracle = om.success;
      }
    } else if (c.network == "pme") {
      const bool pure = c.metric.find("pure") != std::string::npos;
      np.eta_eff = 0.8;
      np.lams = pure ? std::vector<double>{1.0} : lams;
      auto dd = cascade::SchmidtDecomposition::from_eigenvalues(np.lams);
      auto om = cascade::fock::run_network(cascade::fock::Network::pme, np);
      c.closed = cascade::pme_success(dd, det, cfg);
      c.oracle = om.pme_success;
    } else {
      const bool pure = c.metric.find("pure") != std::string::npos;
      np.eta_eff = 1.0;
      np.lams = pure ? std::vector<double>{1.0} : lams;
      const double d0 = c.metric.find("d0=0.3") != std::string::npos   ? 0.3
                        : c.metric.find("d0=0.6") != std::string::npos ? 0.6
                                                                       : 0.0;
      np.d0 = d0;
      np.d1 = std::sqrt(1.0 - d0 * d0);
      auto dd = cascade::SchmidtDecomposition::from_eigenvalues(np.lams);
      auto om = cascade::fock::run_network(cascade::fock::Network::teleport, np);
      c.closed = cascade::teleport_success(dd, det, cfg, {np.d0, np.d1});
      c.oracle = om.qt_success;
    }
  });
  (void)nswap;

  Table t;
  t.columns = {"network", "detector", "eta_r", "eta_t", "metric", "closed", "oracle", "diff"};
  t.set("command", "oracle-check");
  t.set("eta2", eta2);
  double max_diff = 0.0;
  for (const auto& c : cases) {
    const double diff = std::abs(c.closed - c.oracle);
    max_diff = std::max(max_diff, diff);
    t.rows.push_back({c.network, c.detector, c.eta_r, c.eta_t, c.metric, c.closed, c.oracle, diff});
  }
  t.set("max_diff", max_diff);
  emit(t, o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral and protocol metrics for cascade-emission photon pairs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file with [subcommand] sections");

  CommonOpts spectrum_o, schmidt_o, gfactor_o, swap_o, pme_o, teleport_o, oracle_o;
  spectrum_o.grid_extent = 20.0;
  spectrum_o.grid_panels = 100;

  auto* c_spectrum = app.add_subcommand("spectrum", "Sampled |f(dws, dwi)| on a uniform grid");
  add_common(c_spectrum, spectrum_o);

  auto* c_schmidt = app.add_subcommand("schmidt", "Schmidt spectrum, entropy, and mode samples");
  add_common(c_schmidt, schmidt_o);
  std::string modes_path;
  int nmodes = 3;
  c_schmidt->add_option("--emit-modes", modes_path, "Also write mode samples to this path");
  c_schmidt->add_option("--modes", nmodes, "Number of mode pairs for --emit-modes")
      ->check(CLI::Range(1, 200));

  auto* c_gfactor = app.add_subcommand("gfactor", "Cylindrical geometry factor mu_bar");
  add_common(c_gfactor, gfactor_o, false);
  double gH = 100.0, gA = 20.0;
  long gN = 1000;
  std::string gsweep;
  c_gfactor->add_option("--height", gH, "Dimensionless height k3*h")->check(CLI::PositiveNumber);
  c_gfactor->add_option("--radius", gA, "Dimensionless radius k3*a")->check(CLI::PositiveNumber);
  c_gfactor->add_option("--atoms", gN, "Atom count")->check(CLI::Range(1L, 1000000000L));
  c_gfactor->add_option("--sweep", gsweep, "H=start:stop:points or A=start:stop:points");

  ProtoOpts swap_p, pme_p, teleport_p;
  auto* c_swap = app.add_subcommand("swap", "Entanglement swapping fidelity/heralding/success");
  add_common(c_swap, swap_o);
  add_proto(c_swap, swap_p, true);
  c_swap->add_option("--sweep", swap_p.sweep, "eta_r=start:stop:points or eta_t=...");

  auto* c_pme = app.add_subcommand("pme", "PME-state projection success probability");
  add_common(c_pme, pme_o);
  add_proto(c_pme, pme_p, false);
  c_pme->add_option("--sweep", pme_p.sweep, "eta_r=start:stop:points or eta_t=...");

  auto* c_teleport = app.add_subcommand("teleport", "Quantum teleportation success probability");
  add_common(c_teleport, teleport_o);
  add_proto(c_teleport, teleport_p, false);
  c_teleport->add_option("--d0", teleport_p.d0, "Qubit amplitude |d0|")->check(CLI::Range(0.0, 1.0));
  c_teleport->add_option("--sweep", teleport_p.sweep, "d0=start:stop:points");

  auto* c_oracle = app.add_subcommand("oracle-check", "Closed forms vs the Fock detection oracle");
  add_common(c_oracle, oracle_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (c_spectrum->parsed()) run_spectrum(spectrum_o);
    if (c_schmidt->parsed()) run_schmidt(schmidt_o, modes_path, nmodes);
    if (c_gfactor->parsed()) run_gfactor(gfactor_o, gH, gA, gN, gsweep);
    if (c_swap->parsed()) run_swap(swap_o, swap_p);
    if (c_pme->parsed()) run_pme(pme_o, pme_p);
    if (c_teleport->parsed()) run_teleport(teleport_o, teleport_p);
    if (c_oracle->parsed()) run_oracle_check(oracle_o);
  } catch (const cascade::invalid_parameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cascade::grid_mismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cascade::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const cascade::consistency_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
