#pragma once

#include <Eigen/Core>
#include <complex>

#include "cascade/grid.hpp"

namespace cascade {

/// Physics inputs for the cascade two-photon source. Frequencies are measured
/// in units of the natural decay rate gamma3, times in its inverse.
struct EnsembleParams {
  double tau = 0.25;                ///< pump pulse width
  double superradiant_factor = 5.0; ///< collective enhancement N*mu+1
  double gamma3 = 1.0;              ///< natural decay rate of the lower transition
  double collective_shift = 0.0;    ///< input parameter, cancels on two-photon resonance

  void validate() const;  // throws invalid_parameter
};

/// Superradiant idler decay rate (N*mu+1) * gamma3.
double superradiant_rate(const EnsembleParams& params);

/// Normalized signal-idler intensity correlation versus gating delay dt:
/// zero for dt < 0, exp(-rate*dt) for dt >= 0 with g2(0) = 1.
double g2(const EnsembleParams& params, double dt);

/// Cylindrical ensemble shape in dimensionless units H = k3*h, A = k3*a.
struct CylinderGeometry {
  double H = 1.0;
  double A = 1.0;
  long N = 1;

  void validate() const;
};

/// Geometry constant mu_bar for a cylindrical cloud, evaluated by adaptive
/// composite quadrature; both interval endpoints are removable singularities.
/// Feeds the superradiant factor as N*mu_bar + 1.
double geometric_factor(const CylinderGeometry& geom, double rel_tol = 1e-8);

/// Pump pulse description for the time-domain amplitude oracle. Pulse areas
/// and couplings only move the global constant, which downstream consumers
/// normalize away; the detunings enter the adiabaticity check.
struct PumpParams {
  double area_a = 1.0;
  double area_b = 1.0;
  double delta1 = 100.0;  ///< single-photon detuning
  double delta2 = 100.0;  ///< two-photon detuning

  void validate(double tau) const;
  bool adiabatic(double tau) const;  ///< |delta| large against the 1/tau scale
};

/// Two-photon amplitude by direct numerical evaluation of the nested emission
/// time integrals for a Gaussian pump envelope, with common prefactors
/// stripped. Comparable to the closed-form amplitude up to one global complex
/// constant. Step size is halved until converged; throws numeric_error if the
/// refinement budget is exhausted.
std::complex<double> time_domain_amplitude(const PumpParams& pump, const EnsembleParams& params,
                                           double dws, double dwi, double t_final);

/// Sampled complex joint spectral amplitude f(dws, dwi) on a quadrature grid.
struct JointAmplitude {
  FrequencyGrid signal_grid;
  FrequencyGrid idler_grid;
  Eigen::MatrixXcd values;  ///< values(j, k) = f(signal node j, idler node k)
  bool normalized = false;

  /// Grid L2 mass  sum_jk w_j w_k |f_jk|^2.
  double mass() const;
};

/// Closed-form cascade amplitude: Gaussian in the frequency sum modulated by
/// the idler Lorentzian, L2-normalized over the grid.
JointAmplitude joint_amplitude(const EnsembleParams& params, const FrequencyGrid& sgrid,
                               const FrequencyGrid& igrid);

/// Default grid for a parameter set: spacing fine enough for the idler
/// Lorentzian near zero and for the anti-diagonal Gaussian ridge in the tails,
/// capped at max_nodes per axis.
FrequencyGrid default_grid(const EnsembleParams& params, double extent = 1200.0,
                           std::size_t max_nodes = 1200);

}  // namespace cascade
