#include "cascade/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

using std::complex;

void EnsembleParams::validate() const {
  if (!(tau > 0.0)) throw invalid_parameter("EnsembleParams: tau must be > 0");
  if (!(superradiant_factor >= 1.0))
    throw invalid_parameter("EnsembleParams: superradiant_factor must be >= 1");
  if (!(gamma3 > 0.0)) throw invalid_parameter("EnsembleParams: gamma3 must be > 0");
  if (!(superradiant_factor * gamma3 > 0.0))
    throw invalid_parameter("EnsembleParams: superradiant rate must be positive");
}

double superradiant_rate(const EnsembleParams& params) {
  params.validate();
  return params.superradiant_factor * params.gamma3;
}

double g2(const EnsembleParams& params, double dt) {
  const double rate = superradiant_rate(params);
  if (dt < 0.0) return 0.0;
  return std::exp(-rate * dt);
}

void CylinderGeometry::validate() const {
  if (!(H > 0.0) || !(A > 0.0)) throw invalid_parameter("CylinderGeometry: H, A must be > 0");
  if (N < 1) throw invalid_parameter("CylinderGeometry: N must be >= 1");
}

namespace {

double mu_bar_integrand(double x, double H, double A) {
  const double om = 1.0 - x;
  const double om2 = 1.0 - x * x;
  const double s = std::sin(0.5 * H * om);
  const double j = std::cyl_bessel_j(1, A * std::sqrt(om2));
  return (1.0 + x * x) / (om * om * om2) * s * s * j * j;
}

double mu_bar_quadrature(double H, double A, int npanels, int pts) {
  constexpr double kEps = 1e-12;  // endpoint singularities are removable; stay open
  std::vector<double> gx, gw;
  gauss_legendre(pts, gx, gw);
  const double a = -1.0 + kEps, b = 1.0 - kEps;
  const double h = (b - a) / npanels;
  double total = 0.0;
  for (int p = 0; p < npanels; ++p) {
    const double lo = a + p * h;
    double panel = 0.0;
    for (int k = 0; k < pts; ++k)
      panel += gw[k] * mu_bar_integrand(lo + 0.5 * h * (gx[k] + 1.0), H, A);
    total += 0.5 * h * panel;
  }
  return total;
}

}  // namespace

double geometric_factor(const CylinderGeometry& geom, double rel_tol) {
  geom.validate();
  if (geom.N == 1) return 0.0;

  // resolve both the sin^2 oscillation (scale 1/H) and the Bessel oscillation
  int npanels = std::max(32, static_cast<int>(8.0 * std::max(geom.H, geom.A)));
  npanels = std::min(npanels, 1 << 16);
  double prev = mu_bar_quadrature(geom.H, geom.A, npanels, 8);
  for (int it = 0; it < 12; ++it) {
    npanels *= 2;
    const double cur = mu_bar_quadrature(geom.H, geom.A, npanels, 8);
    const double scale = std::max(std::abs(cur), 1e-300);
    if (std::abs(cur - prev) <= rel_tol * scale) {
      const double pref =
          6.0 * (geom.N - 1.0) / (geom.N * geom.A * geom.A * geom.H * geom.H);
      return pref * cur;
    }
    prev = cur;
  }
  throw numeric_error("geometric_factor: quadrature did not converge");
}

void PumpParams::validate(double tau) const {
  if (!(std::isfinite(area_a) && std::isfinite(area_b)))
    throw invalid_parameter("PumpParams: pulse areas must be finite");
  if (delta1 == 0.0 || delta2 == 0.0)
    throw invalid_parameter("PumpParams: detunings must be nonzero");
  (void)tau;
}

bool PumpParams::adiabatic(double tau) const {
  return std::abs(delta1) * tau > 1.0 && std::abs(delta2) * tau > 1.0;
}

namespace {

// Nested emission integral with the driving term b(t) ~ exp(-2 t^2 / tau^2),
// evaluated by a cumulative trapezoid pass at fixed step. Alongside the value
// we accumulate the integral of |outer|: at large detunings the oscillatory
// integrand cancels almost completely, so this is the right scale to judge
// step-refinement convergence against.
struct StepResult {
  complex<double> value;
  double scale;
};

StepResult time_domain_step(const EnsembleParams& p, double dws, double dwi,
                            double t_final, double h) {
  const double rate = superradiant_rate(p);
  const double half = 0.5 * rate;
  const complex<double> i1(0.0, 1.0);
  const double t0 = -5.0 * p.tau;
  const auto n = static_cast<std::size_t>(std::ceil((t_final - t0) / h)) + 1;

  complex<double> inner_prev = 0.0, cum = 0.0, total = 0.0;
  complex<double> outer_prev = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + h * static_cast<double>(k);
    const double b = std::exp(-2.0 * t * t / (p.tau * p.tau));
    const complex<double> inner = b * std::exp(complex<double>(half * t, dws * t));
    if (k > 0) cum += 0.5 * (inner + inner_prev) * h;
    inner_prev = inner;
    const complex<double> outer = std::exp(complex<double>(-half * t, dwi * t)) * cum;
    if (k > 0) {
      total += 0.5 * (outer + outer_prev) * h;
      scale += 0.5 * (std::abs(outer) + std::abs(outer_prev)) * h;
    }
    outer_prev = outer;
  }
  return {total, scale};
}

}  // namespace

complex<double> time_domain_amplitude(const PumpParams& pump, const EnsembleParams& params,
                                      double dws, double dwi, double t_final) {
  params.validate();
  pump.validate(params.tau);
  const double rate = superradiant_rate(params);
  if (t_final < 5.0 * params.tau || t_final * rate < 5.0)
    throw invalid_parameter("time_domain_amplitude: t_final not in the long-time regime");

  double h = std::min(params.tau, 1.0 / rate) / 50.0;
  StepResult prev = time_domain_step(params, dws, dwi, t_final, h);
  for (int it = 0; it < 8; ++it) {
    h *= 0.5;
    const StepResult cur = time_domain_step(params, dws, dwi, t_final, h);
    if (std::abs(cur.value - prev.value) <= 1e-7 * std::max(cur.scale, 1e-300))
      return cur.value;
    prev = cur;
  }
  throw numeric_error("time_domain_amplitude: step refinement did not converge");
}

double JointAmplitude::mass() const {
  const auto& ws = signal_grid.weights();
  const auto& wi = idler_grid.weights();
  double total = 0.0;
  for (Eigen::Index j = 0; j < values.rows(); ++j) {
    double row = 0.0;
    for (Eigen::Index k = 0; k < values.cols(); ++k) row += wi[k] * std::norm(values(j, k));
    total += ws[j] * row;
  }
  return total;
}

JointAmplitude joint_amplitude(const EnsembleParams& params, const FrequencyGrid& sgrid,
                               const FrequencyGrid& igrid) {
  params.validate();
  const double rate = superradiant_rate(params);
  const double tau2_8 = params.tau * params.tau / 8.0;

  JointAmplitude amp;
  amp.signal_grid = sgrid;
  amp.idler_grid = igrid;
  amp.values.resize(static_cast<Eigen::Index>(sgrid.size()),
                    static_cast<Eigen::Index>(igrid.size()));
  for (std::size_t j = 0; j < sgrid.size(); ++j) {
    const double ws = sgrid.nodes()[j];
    for (std::size_t k = 0; k < igrid.size(); ++k) {
      const double wi = igrid.nodes()[k];
      const double sum = ws + wi;
      amp.values(j, k) = std::exp(-sum * sum * tau2_8) /
                         complex<double>(0.5 * rate, -wi);
    }
  }
  const double m = amp.mass();
  amp.values /= std::sqrt(m);
  amp.normalized = true;
  return amp;
}

FrequencyGrid default_grid(const EnsembleParams& params, double extent, std::size_t max_nodes) {
  params.validate();
  const double rate = superradiant_rate(params);
  const double ridge = 2.0 * std::numbers::sqrt2 / params.tau;  // Gaussian ridge width
  const double core_spacing = std::min(rate, ridge) / 6.0;
  const double core_halfwidth = std::max({20.0 / params.tau, 4.0 * rate, 40.0});
  double tail_spacing = ridge / 2.7;

  double cs = core_spacing;
  FrequencyGrid g = FrequencyGrid::composite(extent, core_halfwidth, cs, tail_spacing);
  for (int it = 0; g.size() > max_nodes; ++it) {
    tail_spacing *= 1.2;
    if (it >= 40) cs *= 1.2;  // core alone exceeds the budget
    g = FrequencyGrid::composite(extent, core_halfwidth, cs, tail_spacing);
  }
  return g;
}

}  // namespace cascade
