#include "cascade/fock.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "cascade/errors.hpp"

namespace cascade::fock {

using cd = std::complex<double>;

namespace {

double factorial_product(const Occupation& occ) {
  double f = 1.0;
  for (const auto& [m, n] : occ)
    for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

int total_photons(const Occupation& occ) {
  int n = 0;
  for (const auto& [m, c] : occ) n += c;
  return n;
}

Occupation to_occ(const std::map<std::string, int>& m) {
  Occupation occ;
  for (const auto& [k, v] : m)
    if (v > 0) occ.emplace_back(k, v);
  return occ;
}

}  // namespace

double FockState::norm_sq() const {
  double n = 0.0;
  for (const auto& [occ, a] : amps) n += std::norm(a);
  return n;
}

void FockState::register_mode(const std::string& label) { modes.insert(label); }

bool FockState::registered(const std::string& label) const { return modes.count(label) != 0; }

FockState apply_linear(const FockState& state, const LinearMap& map) {
  for (const auto& [src, tgt] : map) {
    if (!state.registered(src))
      throw invalid_parameter("apply_linear: unregistered source mode " + src);
    (void)tgt;
  }

  FockState out;
  out.cap = state.cap;
  out.modes = state.modes;
  for (const auto& [src, tgt] : map)
    for (const auto& [m, c] : tgt) out.modes.insert(m);

  for (const auto& [occ, amp] : state.amps) {
    // normalized-ket amplitude -> creation-monomial coefficient
    std::vector<std::pair<std::map<std::string, int>, cd>> terms;
    terms.emplace_back(std::map<std::string, int>{}, amp / std::sqrt(factorial_product(occ)));
    for (const auto& [mode, n] : occ) {
      auto it = map.find(mode);
      const std::vector<std::pair<std::string, cd>> identity{{mode, cd(1.0, 0.0)}};
      const auto& tgt = it == map.end() ? identity : it->second;
      for (int rep = 0; rep < n; ++rep) {
        std::vector<std::pair<std::map<std::string, int>, cd>> next;
        next.reserve(terms.size() * tgt.size());
        for (const auto& [o, a] : terms) {
          for (const auto& [m2, c] : tgt) {
            auto o2 = o;
            ++o2[m2];
            next.emplace_back(std::move(o2), a * c);
          }
        }
        terms = std::move(next);
      }
    }
    for (const auto& [o, a] : terms) {
      Occupation key = to_occ(o);
      if (total_photons(key) <= out.cap) out.amps[key] += a;
    }
  }

  // back to normalized-ket amplitudes, pruning numerical zeros
  FockState fin;
  fin.cap = out.cap;
  fin.modes = std::move(out.modes);
  for (const auto& [occ, a] : out.amps) {
    const cd v = a * std::sqrt(factorial_product(occ));
    if (std::abs(v) > 1e-16) fin.amps[occ] = v;
  }
  return fin;
}

FockState beam_splitter(const FockState& state, const std::string& mode_a,
                        const std::string& mode_b, double transmissivity) {
  if (transmissivity < 0.0 || transmissivity > 1.0)
    throw invalid_parameter("beam_splitter: transmissivity outside [0,1]");
  if (!state.registered(mode_a) || !state.registered(mode_b))
    throw invalid_parameter("beam_splitter: unregistered mode");
  const double t = std::sqrt(transmissivity), r = std::sqrt(1.0 - transmissivity);
  LinearMap mp;
  mp[mode_a] = {{mode_a, t}, {mode_b, r}};
  mp[mode_b] = {{mode_a, r}, {mode_b, -t}};
  return apply_linear(state, mp);
}

FockState efficiency_loss(const FockState& state, const std::string& mode, double eta) {
  if (eta < 0.0 || eta > 1.0) throw invalid_parameter("efficiency_loss: eta outside [0,1]");
  if (!state.registered(mode)) throw invalid_parameter("efficiency_loss: unregistered mode");
  LinearMap mp;
  mp[mode] = {{mode, std::sqrt(eta)}, {mode + ".loss", std::sqrt(1.0 - eta)}};
  return apply_linear(state, mp);
}

FockState tensor(const FockState& a, const FockState& b) {
  FockState out;
  out.cap = std::min(a.cap, b.cap);
  out.modes = a.modes;
  out.modes.insert(b.modes.begin(), b.modes.end());
  for (const auto& [o1, a1] : a.amps) {
    for (const auto& [o2, a2] : b.amps) {
      std::map<std::string, int> m;
      for (const auto& [k, v] : o1) m[k] += v;
      for (const auto& [k, v] : o2) m[k] += v;
      Occupation occ = to_occ(m);
      if (total_photons(occ) <= out.cap) out.amps[occ] += a1 * a2;
    }
  }
  return out;
}

namespace {

/// env occupation -> kept occupation -> coherent amplitude
using BranchMap = std::map<Occupation, std::map<Occupation, cd>>;

BranchMap branch_split(const FockState& state, const std::vector<ClickGroup>& groups,
                       const std::set<std::string>& keep) {
  BranchMap branches;
  for (const auto& [occ, amp] : state.amps) {
    bool ok = true;
    for (const auto& g : groups) {
      int n = 0;
      for (const auto& [m, c] : occ)
        for (const auto& gm : g.modes)
          if (m == gm) n += c;
      if ((g.kind == ClickKind::click && n < 1) || (g.kind == ClickKind::one && n != 1) ||
          (g.kind == ClickKind::silent && n != 0)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Occupation kept, env;
    for (const auto& [m, c] : occ) (keep.count(m) ? kept : env).emplace_back(m, c);
    branches[env][kept] += amp;
  }
  return branches;
}

}  // namespace

ConditionalDensity condition_and_trace(const FockState& state,
                                       const std::vector<ClickGroup>& groups,
                                       const std::vector<Occupation>& basis,
                                       const std::set<std::string>& keep) {
  if (groups.empty()) throw invalid_parameter("condition_and_trace: empty click spec");
  std::map<Occupation, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);

  ConditionalDensity out;
  out.basis = basis;
  out.rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis.size()),
                                   static_cast<Eigen::Index>(basis.size()));
  for (const auto& [env, vec] : branch_split(state, groups, keep)) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const auto& [kept, a] : vec) {
      auto it = index.find(kept);
      if (it == index.end())
        throw consistency_error("condition_and_trace: kept occupation outside basis");
      v[it->second] += a;
    }
    out.rho += v * v.adjoint();
  }
  out.trace = out.rho.trace().real();
  return out;
}

namespace {

FockState cascade_site(char site, double eta1, const std::vector<double>& lams) {
  FockState s;
  s.amps[{}] = std::sqrt(1.0 - eta1);
  for (std::size_t j = 0; j < lams.size(); ++j) {
    const std::string js = std::to_string(j);
    Occupation occ{{std::string("i") + site + js, 1}, {std::string("s") + site + js, 1}};
    std::sort(occ.begin(), occ.end());
    s.amps[occ] = std::sqrt(eta1 * lams[j]);
    s.register_mode(std::string("i") + site + js);
    s.register_mode(std::string("s") + site + js);
  }
  return s;
}

FockState raman_site(char site, double eta2) {
  FockState s;
  s.amps[{}] = std::sqrt(1.0 - eta2);
  Occupation occ{{std::string("r") + site, 1}, {std::string("S") + site, 1}};
  std::sort(occ.begin(), occ.end());
  s.amps[occ] = std::sqrt(eta2);
  s.register_mode(std::string("r") + site);
  s.register_mode(std::string("S") + site);
  return s;
}

std::vector<std::string> mode_family(const std::string& prefix, std::size_t r) {
  std::vector<std::string> v;
  for (std::size_t j = 0; j < r; ++j) v.push_back(prefix + std::to_string(j));
  return v;
}

struct SwapResult {
  double f = 0.0, p1 = 0.0, nfactor = 0.0;
  Eigen::Matrix4cd rho;  // normalized over {0, SA, SB, SA SB}
};

SwapResult swap_network(const NetworkParams& p) {
  const std::size_t r = p.lams.size();
  const double s2 = 1.0 / std::numbers::sqrt2;

  FockState st = tensor(tensor(cascade_site('A', p.eta1, p.lams), raman_site('A', p.eta2)),
                        tensor(cascade_site('B', p.eta1, p.lams), raman_site('B', p.eta2)));

  std::vector<cd> phi = p.raman_coeffs;
  if (phi.empty()) {
    phi.assign(r, cd(0.0, 0.0));
    phi[0] = 1.0;
  }
  if (phi.size() != r) throw invalid_parameter("swap oracle: Raman coefficient rank mismatch");

  // infrared 50/50 mixing of cascade idler vs Raman photon at each site
  LinearMap mp;
  for (auto [site, d1, d2] : {std::tuple<char, const char*, const char*>{'A', "m1", "m2"},
                              {'B', "n1", "n2"}}) {
    for (std::size_t j = 0; j < r; ++j) {
      const std::string js = std::to_string(j);
      mp[std::string("i") + site + js] = {{d1 + js, s2}, {d2 + js, s2}};
    }
    std::vector<std::pair<std::string, cd>> rt;
    for (std::size_t j = 0; j < r; ++j) {
      if (std::abs(phi[j]) == 0.0) continue;
      const std::string js = std::to_string(j);
      rt.emplace_back(d1 + js, s2 * phi[j]);
      rt.emplace_back(d2 + js, -s2 * phi[j]);
    }
    mp[std::string("r") + site] = std::move(rt);
  }
  st = apply_linear(st, mp);

  // detector efficiency on the clicked infrared arms
  mp.clear();
  for (const char* pre : {"m1", "n1"}) {
    for (std::size_t j = 0; j < r; ++j) {
      const std::string js = std::to_string(j);
      mp[pre + js] = {{pre + ("d" + js), std::sqrt(p.eta_eff)},
                      {pre + ("l" + js), std::sqrt(1.0 - p.eta_eff)}};
    }
  }
  st = apply_linear(st, mp);

  const auto m1d = mode_family("m1d", r), n1d = mode_family("n1d", r);
  const auto m2 = mode_family("m2", r), n2 = mode_family("n2", r);
  const std::vector<ClickGroup> herald{{m1d, ClickKind::click},
                                       {m2, ClickKind::silent},
                                       {n1d, ClickKind::click},
                                       {n2, ClickKind::silent}};

  // normalization: herald clicks only, everything traced
  double nfactor = 0.0;
  for (const auto& [env, vec] : branch_split(st, herald, {}))
    for (const auto& [kept, a] : vec) nfactor += std::norm(a);

  // telecom 50/50 mixing and transmission loss, then the midway detection
  mp.clear();
  for (std::size_t j = 0; j < r; ++j) {
    const std::string js = std::to_string(j);
    mp["sA" + js] = {{"c1" + js, s2}, {"c2" + js, s2}};
    mp["sB" + js] = {{"c1" + js, s2}, {"c2" + js, -s2}};
  }
  st = apply_linear(st, mp);
  mp.clear();
  for (std::size_t j = 0; j < r; ++j) {
    const std::string js = std::to_string(j);
    mp["c1" + js] = {{"c1d" + js, std::sqrt(p.eta_t)}, {"c1l" + js, std::sqrt(1.0 - p.eta_t)}};
  }
  st = apply_linear(st, mp);

  std::vector<ClickGroup> full = herald;
  full.push_back({mode_family("c1d", r), p.pnrd ? ClickKind::one : ClickKind::click});
  full.push_back({mode_family("c2", r), ClickKind::silent});

  const std::vector<Occupation> basis{
      {}, {{"SA", 1}}, {{"SB", 1}}, {{"SA", 1}, {"SB", 1}}};
  ConditionalDensity cd4 = condition_and_trace(st, full, basis, {"SA", "SB"});

  SwapResult out;
  out.nfactor = nfactor;
  Eigen::Vector4cd v(0.0, s2, s2, 0.0);
  out.f = (v.adjoint() * cd4.rho * v).value().real() / cd4.trace;
  out.p1 = cd4.trace / nfactor;
  out.rho = cd4.rho / cd4.trace;
  return out;
}

double pme_oracle(const SwapResult& s) {
  const double s2 = 1.0 / std::numbers::sqrt2;
  // |PME> = (SA' SD' + SB' SC')/sqrt2 over the AB x CD product basis
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  v[1 * 4 + 2] = s2;
  v[2 * 4 + 1] = s2;
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(16, 16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      big.block(i * 4, j * 4, 4, 4) = s.rho(i, j) * s.rho;
  return (v.adjoint() * big * v).value().real();
}

double teleport_oracle(const SwapResult& s, const NetworkParams& p) {
  const double s2 = 1.0 / std::numbers::sqrt2;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(s.rho);

  const std::vector<Occupation> ab{{}, {{"SA", 1}}, {{"SB", 1}}, {{"SA", 1}, {"SB", 1}}};
  const std::vector<Occupation> cdb{{}, {{"SC", 1}}, {{"SD", 1}}, {{"SC", 1}, {"SD", 1}}};
  auto branches = [&](const std::vector<Occupation>& basis) {
    std::vector<FockState> out;
    for (int k = 0; k < 4; ++k) {
      if (es.eigenvalues()[k] <= 1e-14) continue;
      FockState b;
      for (const auto& o : basis)
        for (const auto& [m, c] : o) b.register_mode(m);
      const double w = std::sqrt(es.eigenvalues()[k]);
      for (int i = 0; i < 4; ++i)
        if (std::abs(es.eigenvectors()(i, k)) > 1e-15)
          b.amps[basis[i]] = w * es.eigenvectors()(i, k);
      out.push_back(std::move(b));
    }
    return out;
  };
  const auto br_ab = branches(ab), br_cd = branches(cdb);

  FockState chi;
  chi.register_mode("I1");
  chi.register_mode("I2");
  if (std::abs(p.d0) > 0.0) chi.amps[{{"I1", 1}}] = p.d0;
  if (std::abs(p.d1) > 0.0) chi.amps[{{"I2", 1}}] = p.d1;

  LinearMap mp;
  mp["I1"] = {{"I1c", s2}, {"Ac", s2}};
  mp["SA"] = {{"I1c", s2}, {"Ac", -s2}};
  mp["I2"] = {{"I2c", s2}, {"Cc", s2}};
  mp["SC"] = {{"I2c", s2}, {"Cc", -s2}};

  struct Event {
    const char *e1, *e2;
    double sign;
  };
  const Event events[] = {{"I1c", "I2c", 1.0}, {"Ac", "Cc", 1.0},
                          {"I1c", "Cc", -1.0}, {"Ac", "I2c", -1.0}};
  const std::vector<std::string> dets{"I1c", "Ac", "I2c", "Cc"};

  double total = 0.0;
  for (const auto& ba : br_ab) {
    for (const auto& bc : br_cd) {
      FockState st = apply_linear(tensor(tensor(chi, ba), bc), mp);
      for (const auto& ev : events) {
        std::vector<ClickGroup> groups{{{ev.e1}, ClickKind::click}, {{ev.e2}, ClickKind::click}};
        for (const auto& m : dets)
          if (m != ev.e1 && m != ev.e2) groups.push_back({{m}, ClickKind::silent});
        // P_i F_i: overlap with (d0 SB + sign d1 SD) summed over environments
        for (const auto& [env, vec] : branch_split(st, groups, {"SB", "SD"})) {
          cd amp = 0.0;
          auto it = vec.find({{"SB", 1}});
          if (it != vec.end()) amp += std::conj(p.d0) * it->second;
          it = vec.find({{"SD", 1}});
          if (it != vec.end()) amp += ev.sign * std::conj(p.d1) * it->second;
          total += std::norm(amp);
        }
      }
    }
  }
  return total;
}

}  // namespace

FockState build_joint_state(double eta1, double eta2, const std::vector<double>& lams) {
  if (!(eta1 > 0.0 && eta1 < 1.0 && eta2 > 0.0 && eta2 < 1.0))
    throw invalid_parameter("build_joint_state: eta1, eta2 must lie in (0,1)");
  if (lams.empty() || lams.size() > 3)
    throw invalid_parameter("build_joint_state: Schmidt rank must be 1..3");
  return tensor(tensor(cascade_site('A', eta1, lams), raman_site('A', eta2)),
                tensor(cascade_site('B', eta1, lams), raman_site('B', eta2)));
}

OracleMetrics run_network(Network network, const NetworkParams& params) {
  if (params.lams.empty() || params.lams.size() > 3)
    throw invalid_parameter("run_network: Schmidt rank must be 1..3");
  SwapResult s = swap_network(params);

  OracleMetrics m;
  m.fidelity = s.f;
  m.heralding = 2.0 * s.p1;
  m.success = 2.0 * s.p1 * s.f;
  m.normalization = s.nfactor;
  m.swap_density = s.rho;
  if (network == Network::pme) m.pme_success = pme_oracle(s);
  if (network == Network::teleport) m.qt_success = teleport_oracle(s, params);
  return m;
}

}  // namespace cascade::fock
