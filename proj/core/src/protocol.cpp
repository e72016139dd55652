#include "cascade/protocol.hpp"

#include <cmath>

#include "cascade/errors.hpp"

namespace cascade {

void DetectorModel::validate() const {
  if (eta_t < 0.0 || eta_t > 1.0 || eta_eff < 0.0 || eta_eff > 1.0)
    throw invalid_parameter("DetectorModel: efficiencies must lie in [0,1]");
}

void SwapConfig::validate() const {
  if (!(eta_r > 0.0)) throw invalid_parameter("SwapConfig: eta_r must be > 0");
}

void TeleportInput::validate() const {
  if (std::abs(std::norm(d0) + std::norm(d1) - 1.0) > 1e-10)
    throw invalid_parameter("TeleportInput: |d0|^2 + |d1|^2 must be 1");
}

double mode_overlap(const SchmidtDecomposition& decomp, const Eigen::VectorXcd& phi) {
  if (phi.size() != decomp.idler_modes.rows())
    throw grid_mismatch("mode_overlap: Raman mode not sampled on the idler grid");
  const auto& w = decomp.idler_grid.weights();
  double nrm = 0.0;
  for (Eigen::Index k = 0; k < phi.size(); ++k) nrm += w[k] * std::norm(phi[k]);
  if (std::abs(nrm - 1.0) > 1e-8)
    throw invalid_parameter("mode_overlap: Raman mode must have unit L2 norm");

  double o = 0.0;
  for (int m = 0; m < decomp.rank; ++m) {
    std::complex<double> ip = 0.0;
    for (Eigen::Index k = 0; k < phi.size(); ++k)
      ip += w[k] * decomp.idler_modes(k, m) * std::conj(phi[k]);
    o += decomp.eigenvalues[m] * std::norm(ip);
  }
  return o;
}

double resolved_overlap(const SchmidtDecomposition& decomp, const SwapConfig& cfg) {
  if (cfg.raman_mode.size() == 0)
    return decomp.eigenvalues.empty() ? 0.0 : decomp.eigenvalues.front();
  return mode_overlap(decomp, cfg.raman_mode);
}

namespace {

double swap_a(const SchmidtDecomposition& decomp, const DetectorModel& det, const SwapConfig& cfg) {
  return cfg.eta_r * (2.0 - det.eta_t) * (1.0 + decomp.purity);
}

double herald_denominator(double eta_r) {
  const double s = std::sqrt(eta_r) + 1.0 / std::sqrt(eta_r);
  return s * s;
}

}  // namespace

ProtocolMetrics swap_metrics(const SchmidtDecomposition& decomp, const DetectorModel& det,
                             const SwapConfig& cfg) {
  det.validate();
  cfg.validate();
  const double o = resolved_overlap(decomp, cfg);
  const double P = decomp.purity;
  const double den = herald_denominator(cfg.eta_r);

  ProtocolMetrics m;
  if (det.kind == DetectorKind::nrpd) {
    m.fidelity = (1.0 + o) / (cfg.eta_r * (2.0 - det.eta_t) * (1.0 + P) / 2.0 + 2.0);
    m.heralding =
        (cfg.eta_r * det.eta_t * (2.0 - det.eta_t) * (1.0 + P) / 2.0 + 2.0 * det.eta_t) / den;
  } else {
    m.fidelity = (1.0 + o) / (cfg.eta_r * (1.0 - det.eta_t) * (1.0 + P) + 2.0);
    m.heralding =
        (cfg.eta_r * det.eta_t * (1.0 - det.eta_t) * (1.0 + P) + 2.0 * det.eta_t) / den;
  }
  m.success = det.eta_t * (1.0 + o) / den;
  return m;
}

double vacuum_coefficient(const DetectorModel& det, const SwapConfig& cfg,
                          const SchmidtDecomposition& decomp) {
  det.validate();
  cfg.validate();
  return swap_a(decomp, det, cfg) / 4.0;
}

double pme_success(const SchmidtDecomposition& decomp, const DetectorModel& det,
                   const SwapConfig& cfg) {
  det.validate();
  cfg.validate();
  const double l1 = decomp.eigenvalues.empty() ? 0.0 : decomp.eigenvalues.front();
  const double a = swap_a(decomp, det, cfg);
  return 4.0 * (1.0 + l1 * l1) / ((a + 4.0) * (a + 4.0));
}

double teleport_success(const SchmidtDecomposition& decomp, const DetectorModel& det,
                        const SwapConfig& cfg, const TeleportInput& q) {
  det.validate();
  cfg.validate();
  q.validate();
  const double l1 = decomp.eigenvalues.empty() ? 0.0 : decomp.eigenvalues.front();
  // swap fidelity enters as the NRPD branch with the matched Raman mode,
  // regardless of detector kind
  const double f = 2.0 * (1.0 + l1) / (swap_a(decomp, det, cfg) + 4.0);
  const double pop = std::norm(q.d0) * std::norm(q.d1);
  return f * f / ((1.0 + l1) * (1.0 + l1)) * (1.0 + (2.0 * l1 * l1 - 2.0) * pop);
}

std::pair<double, double> teleport_conditional_density_metrics(const SchmidtDecomposition& decomp,
                                                               const DetectorModel& det,
                                                               const SwapConfig& cfg,
                                                               const TeleportInput& q) {
  det.validate();
  cfg.validate();
  q.validate();
  const double l1 = decomp.eigenvalues.empty() ? 0.0 : decomp.eigenvalues.front();
  const double a = swap_a(decomp, det, cfg);
  const double d2 = (a + 4.0) * (a + 4.0);
  const double p00 = std::norm(q.d0), p11 = std::norm(q.d1);

  // rho_1 over {vac, S_B, S_D}: vacuum weight, one-excitation block with
  // lambda_1^2 d0 d1* coherence
  const double p1 = (a + 2.0) / (2.0 * d2) + (p00 + p11) / d2;
  const double match = (p00 * p00 + p11 * p11 + 2.0 * l1 * l1 * p00 * p11) / d2;
  const double f1 = match / p1;

  const double pqt = teleport_success(decomp, det, cfg, q);
  if (std::abs(4.0 * p1 * f1 - pqt) > 1e-12)
    throw consistency_error("teleport metrics: 4 P1 F1 identity violated");
  return {f1, p1};
}

}  // namespace cascade
