#pragma once

#include <Eigen/Core>
#include <complex>
#include <utility>

#include "cascade/schmidt.hpp"

namespace cascade {

enum class DetectorKind { nrpd, pnrd };

/// Detection chain efficiencies. eta_eff cancels in every closed-form metric
/// and is carried only so oracle comparisons can exercise it.
struct DetectorModel {
  DetectorKind kind = DetectorKind::nrpd;
  double eta_t = 1.0;    ///< telecom-arm quantum efficiency
  double eta_eff = 1.0;  ///< infrared-arm quantum efficiency

  void validate() const;
};

/// Swapping-stage configuration: the cascade/Raman efficiency ratio and the
/// Raman mode shape read against the idler Schmidt modes. An empty raman_mode
/// means the engineered matched mode (overlap = lambda_1).
struct SwapConfig {
  double eta_r = 1.0;
  Eigen::VectorXcd raman_mode;  ///< sampled on the idler grid, unit L2 norm

  void validate() const;
};

struct ProtocolMetrics {
  double fidelity = 0.0;
  double heralding = 0.0;
  double success = 0.0;
};

/// Qubit amplitudes for state transfer.
struct TeleportInput {
  std::complex<double> d0{1.0, 0.0};
  std::complex<double> d1{0.0, 0.0};

  void validate() const;  ///< |d0|^2 + |d1|^2 = 1 within 1e-10
};

/// Overlap o = sum_j lambda_j |<phi_j, Phi>|^2 under the weighted Hermitian
/// inner product on the idler grid. Real, in [0, lambda_1].
double mode_overlap(const SchmidtDecomposition& decomp, const Eigen::VectorXcd& phi);

/// Overlap used by the metrics: lambda_1 when cfg.raman_mode is empty,
/// otherwise mode_overlap(decomp, cfg.raman_mode).
double resolved_overlap(const SchmidtDecomposition& decomp, const SwapConfig& cfg);

/// Entanglement-swapping fidelity, heralding, and success probabilities for
/// the configured detector kind.
ProtocolMetrics swap_metrics(const SchmidtDecomposition& decomp, const DetectorModel& det,
                             const SwapConfig& cfg);

/// Vacuum coefficient c0 = a/4 with a = eta_r (2 - eta_t)(1 + sum lambda^2).
double vacuum_coefficient(const DetectorModel& det, const SwapConfig& cfg,
                          const SchmidtDecomposition& decomp);

/// Success probability of projecting onto the PME state.
double pme_success(const SchmidtDecomposition& decomp, const DetectorModel& det,
                   const SwapConfig& cfg);

/// Success probability of teleporting (d0, d1); detector kind does not enter
/// and the matched Raman mode is assumed.
double teleport_success(const SchmidtDecomposition& decomp, const DetectorModel& det,
                        const SwapConfig& cfg, const TeleportInput& q);

/// (F1, P1) of the single-click-pair conditional density rho_1; checks the
/// identity P_QT = 4 P1 F1 and throws consistency_error if it fails.
std::pair<double, double> teleport_conditional_density_metrics(const SchmidtDecomposition& decomp,
                                                               const DetectorModel& det,
                                                               const SwapConfig& cfg,
                                                               const TeleportInput& q);

}  // namespace cascade
