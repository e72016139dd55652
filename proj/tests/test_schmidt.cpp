#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cascade/errors.hpp>
#include <cascade/schmidt.hpp>
#include <cascade/spectral.hpp>

#include <cmath>
#include <complex>

using namespace cascade;
using std::complex;

namespace {

// modest grid: fast, and accurate enough for sub-percent spectral checks
JointAmplitude test_amplitude(double tau = 0.25, double factor = 5.0) {
  EnsembleParams p{tau, factor, 1.0};
  auto g = default_grid(p, 600.0, 600);
  return joint_amplitude(p, g, g);
}

JointAmplitude separable_amplitude() {
  auto g = FrequencyGrid::composite(60.0, 30.0, 0.5, 1.0);
  JointAmplitude amp;
  amp.signal_grid = g;
  amp.idler_grid = g;
  amp.values.resize(g.size(), g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double ws = g.nodes()[j], wi = g.nodes()[k];
      amp.values(j, k) = std::exp(-ws * ws / 32.0) / complex<double>(2.5, -wi);
    }
  amp.values /= std::sqrt(amp.mass());
  amp.normalized = true;
  return amp;
}

}  // namespace

TEST_CASE("kernels: trace identities and hermiticity") {
  auto amp = test_amplitude();
  auto [k1, k2] = build_kernels(amp);

  CHECK(k1.weighted_trace() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(k2.weighted_trace() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK((k1.entries - k1.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((k2.entries - k2.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(k1.weighted_trace_sq() == doctest::Approx(k2.weighted_trace_sq()).epsilon(1e-8));

  JointAmplitude raw = amp;
  raw.normalized = false;
  CHECK_THROWS_AS(build_kernels(raw), invalid_parameter);
}

TEST_CASE("separable amplitude yields a rank-1 decomposition") {
  auto amp = separable_amplitude();
  auto [k1, k2] = build_kernels(amp);
  auto d = decompose(k1, k2, amp);
  CHECK(d.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(d.eigenvalues[1] < 1e-10);
  CHECK(d.rank == 1);
  CHECK(d.entropy_nats == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(d.reconstruction_error < 1e-4);
}

TEST_CASE("decomposition: spectrum, orthonormality, reconstruction") {
  auto amp = test_amplitude();
  auto [k1, k2] = build_kernels(amp);
  auto d = decompose(k1, k2, amp);

  CHECK(d.eigenvalues[0] == doctest::Approx(0.80).epsilon(0.025));
  double sum = 0.0, sum2 = 0.0;
  for (double l : d.eigenvalues) {
    CHECK(l >= 0.0);
    sum += l;
    sum2 += l * l;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sum2 == doctest::Approx(k1.weighted_trace_sq()).epsilon(1e-6));
  CHECK(d.spectrum_mismatch < 1e-5);

  // weighted orthonormality of both mode families
  const auto& ws = d.signal_grid.weights();
  const auto& wi = d.idler_grid.weights();
  for (int m = 0; m < std::min(6, d.rank); ++m) {
    for (int n = 0; n <= m; ++n) {
      complex<double> ip_s = 0.0, ip_i = 0.0;
      for (Eigen::Index j = 0; j < d.signal_modes.rows(); ++j)
        ip_s += ws[j] * d.signal_modes(j, m) * std::conj(d.signal_modes(j, n));
      for (Eigen::Index j = 0; j < d.idler_modes.rows(); ++j)
        ip_i += wi[j] * d.idler_modes(j, m) * std::conj(d.idler_modes(j, n));
      const double want = m == n ? 1.0 : 0.0;
      CHECK(std::abs(ip_s - want) < 1e-6);
      CHECK(std::abs(ip_i - want) < 1e-6);
    }
  }

  // truncated reconstruction residual is bounded by the dropped mass
  double kept = 0.0;
  for (int m = 0; m < d.rank; ++m) kept += d.eigenvalues[m];
  CHECK(d.reconstruction_error <= std::sqrt(std::max(0.0, 1.0 - kept)) + 1e-6);

  // grid refinement moves lambda_1 by well under a percent
  EnsembleParams p{0.25, 5.0, 1.0};
  auto gfine = default_grid(p, 600.0, 1200);
  auto dfine = decompose(joint_amplitude(p, gfine, gfine));
  CHECK(std::abs(dfine.eigenvalues[0] - d.eigenvalues[0]) / d.eigenvalues[0] < 0.01);
}

TEST_CASE("entropy") {
  CHECK(entropy({1.0}) == 0.0);
  CHECK(entropy({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  auto d = SchmidtDecomposition::from_eigenvalues({0.5, 0.3, 0.2});
  CHECK(d.entropy_nats == doctest::Approx(-(0.5 * std::log(0.5) + 0.3 * std::log(0.3) +
                                            0.2 * std::log(0.2)))
                              .epsilon(1e-14));
  CHECK(d.entropy_bits == doctest::Approx(d.entropy_nats / std::log(2.0)).epsilon(1e-14));
  CHECK(d.purity == doctest::Approx(0.25 + 0.09 + 0.04).epsilon(1e-14));
}

TEST_CASE("mode profiles") {
  auto amp = test_amplitude();
  auto d = decompose(amp);

  auto psi1 = mode_profile(d, 1, KernelSide::signal);
  // unit weighted norm
  double nrm = 0.0, remax = 0.0, immax = 0.0;
  for (Eigen::Index j = 0; j < psi1.values.size(); ++j) {
    nrm += d.signal_grid.weights()[j] * std::norm(psi1.values[j]);
    remax = std::max(remax, std::abs(psi1.values[j].real()));
    immax = std::max(immax, std::abs(psi1.values[j].imag()));
  }
  CHECK(nrm == doctest::Approx(1.0).epsilon(1e-8));

  // dominant signal modes are essentially real after phase fixing
  CHECK(immax < 1e-3 * remax);
  auto psi2 = mode_profile(d, 2, KernelSide::signal);
  double re2 = 0.0, im2 = 0.0;
  for (Eigen::Index j = 0; j < psi2.values.size(); ++j) {
    re2 = std::max(re2, std::abs(psi2.values[j].real()));
    im2 = std::max(im2, std::abs(psi2.values[j].imag()));
  }
  CHECK(im2 < 1e-3 * re2);

  // Gaussian-like leading mode: FWHM of |psi1|^2... use |psi1| directly,
  // expected ~ 4 sqrt(2 ln 2)/tau for tau = 0.25
  double half_level = remax / 2.0;
  double lo = 0.0, hi = 0.0;
  for (Eigen::Index j = 1; j < psi1.values.size(); ++j) {
    const double a = std::abs(psi1.values[j - 1]), b = std::abs(psi1.values[j]);
    if (a < half_level && b >= half_level) lo = psi1.nodes[j];
    if (a >= half_level && b < half_level) hi = psi1.nodes[j - 1];
  }
  const double fwhm = hi - lo;
  CHECK(fwhm == doctest::Approx(4.0 * std::sqrt(2.0 * std::log(2.0)) / 0.25).epsilon(0.15));

  CHECK_THROWS_AS(mode_profile(d, 0, KernelSide::signal), invalid_parameter);
  CHECK_THROWS_AS(mode_profile(d, d.rank + 1, KernelSide::idler), invalid_parameter);
}

TEST_CASE("eigenvalue monotonicity in pulse width and superradiance") {
  double prev_tau = 2.0;
  for (double tau : {0.1, 0.25, 0.5}) {
    EnsembleParams p{tau, 5.0, 1.0};
    auto g = default_grid(p, 600.0, 700);
    auto d = decompose(joint_amplitude(p, g, g));
    CHECK(d.eigenvalues[0] <= prev_tau + 1e-9);
    prev_tau = d.eigenvalues[0];
  }
  double prev_fac = 2.0;
  for (double fac : {5.0, 10.0}) {
    EnsembleParams p{0.25, fac, 1.0};
    auto g = default_grid(p, 600.0, 700);
    auto d = decompose(joint_amplitude(p, g, g));
    CHECK(d.eigenvalues[0] <= prev_fac + 1e-9);
    prev_fac = d.eigenvalues[0];
  }
}
