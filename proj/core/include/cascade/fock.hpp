#pragma once

#include <Eigen/Core>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cascade::fock {

/// Occupation key: sorted (mode label, count) pairs, counts > 0 only.
using Occupation = std::vector<std::pair<std::string, int>>;

/// Truncated superposition over occupation numbers of registered modes.
/// Sub-normalized states are allowed (they appear after conditioning).
struct FockState {
  std::map<Occupation, std::complex<double>> amps;
  std::set<std::string> modes;  ///< registered labels
  int cap = 4;                  ///< total-photon truncation

  double norm_sq() const;
  void register_mode(const std::string& label);
  bool registered(const std::string& label) const;
};

/// Target expansion of one creation operator: mode -> sum coeff * mode'.
using LinearMap = std::map<std::string, std::vector<std::pair<std::string, std::complex<double>>>>;

/// Applies a linear-optical map a_m^dag -> sum_k c_mk b_k^dag to every photon,
/// dropping terms beyond the truncation cap. Unlisted modes pass through.
FockState apply_linear(const FockState& state, const LinearMap& map);

/// Two-mode beam splitter of the given transmissivity T:
/// a^dag -> sqrt(T) a^dag + sqrt(1-T) b^dag, b^dag -> sqrt(1-T) a^dag - sqrt(T) b^dag.
/// Throws invalid_parameter on unregistered modes or T outside [0,1].
FockState beam_splitter(const FockState& state, const std::string& mode_a,
                        const std::string& mode_b, double transmissivity);

/// Routes a fraction 1-eta of the mode's photons into a fresh vacuum loss
/// mode named `<mode>.loss`.
FockState efficiency_loss(const FockState& state, const std::string& mode, double eta);

FockState tensor(const FockState& a, const FockState& b);

enum class ClickKind { click, one, silent };  ///< >=1 (NRPD), ==1 (PNRD), ==0

struct ClickGroup {
  std::vector<std::string> modes;  ///< photon counts summed across the group
  ClickKind kind = ClickKind::click;
};

/// Un-normalized conditional density over the kept modes after projecting the
/// click pattern and tracing every other (environment) mode.
struct ConditionalDensity {
  std::vector<Occupation> basis;
  Eigen::MatrixXcd rho;
  double trace = 0.0;
};

/// Applies the click projectors and traces detected/lost modes. The basis
/// fixes the row/column order of the retained-mode density.
ConditionalDensity condition_and_trace(const FockState& state,
                                       const std::vector<ClickGroup>& groups,
                                       const std::vector<Occupation>& basis,
                                       const std::set<std::string>& keep);

/// Four-factor source state of the swapping network: cascade pairs at sites A
/// and B expanded over Schmidt modes, plus the Raman excitations, truncated at
/// second order in the small generation amplitudes eta1, eta2.
FockState build_joint_state(double eta1, double eta2, const std::vector<double>& lams);

enum class Network { swap, pme, teleport };

struct NetworkParams {
  double eta1 = 0.05;  ///< cascade-pair generation probability
  double eta2 = 0.05;  ///< Raman generation probability
  double eta_t = 1.0;
  double eta_eff = 1.0;
  std::vector<double> lams{1.0};  ///< Schmidt spectrum, rank <= 3
  bool pnrd = false;              ///< midway detector resolves photon number
  std::vector<std::complex<double>> raman_coeffs;  ///< Raman mode over Schmidt
                                                   ///< modes; empty = matched
  std::complex<double> d0{1.0, 0.0};  ///< teleport qubit
  std::complex<double> d1{0.0, 0.0};
};

struct OracleMetrics {
  double fidelity = 0.0;
  double heralding = 0.0;
  double success = 0.0;        ///< swap success 2 P1 F
  double pme_success = 0.0;    ///< filled by Network::pme
  double qt_success = 0.0;     ///< filled by Network::teleport
  double normalization = 0.0;  ///< the three-term normalization N
  Eigen::Matrix4cd swap_density;  ///< normalized, basis {0, SA, SB, SA SB}
};

/// Runs the requested detection network by brute force and extracts metrics.
OracleMetrics run_network(Network network, const NetworkParams& params);

}  // namespace cascade::fock
