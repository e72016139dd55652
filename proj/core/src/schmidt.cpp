#include "cascade/schmidt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "cascade/errors.hpp"

namespace cascade {

double KernelMatrix::weighted_trace() const {
  const auto& w = grid.weights();
  double tr = 0.0;
  for (Eigen::Index j = 0; j < entries.rows(); ++j) tr += w[j] * entries(j, j).real();
  return tr;
}

double KernelMatrix::weighted_trace_sq() const {
  const auto& w = grid.weights();
  double tr = 0.0;
  for (Eigen::Index j = 0; j < entries.rows(); ++j)
    for (Eigen::Index k = 0; k < entries.cols(); ++k)
      tr += w[j] * w[k] * std::norm(entries(j, k));
  return tr;
}

std::pair<KernelMatrix, KernelMatrix> build_kernels(const JointAmplitude& amp) {
  if (!amp.normalized) throw invalid_parameter("build_kernels: amplitude must be normalized");
  const Eigen::Index ns = amp.values.rows(), ni = amp.values.cols();
  Eigen::VectorXd ws = Eigen::Map<const Eigen::VectorXd>(amp.signal_grid.weights().data(), ns);
  Eigen::VectorXd wi = Eigen::Map<const Eigen::VectorXd>(amp.idler_grid.weights().data(), ni);

  KernelMatrix k1{amp.signal_grid, {}, KernelSide::signal};
  KernelMatrix k2{amp.idler_grid, {}, KernelSide::idler};
  {
    Eigen::MatrixXcd t = amp.values * wi.asDiagonal();
    k1.entries = t * amp.values.adjoint();
  }
  {
    Eigen::MatrixXcd t = amp.values.transpose() * ws.asDiagonal();
    k2.entries = t * amp.values.conjugate();
  }
  // roundoff symmetrization
  k1.entries = 0.5 * (k1.entries + k1.entries.adjoint()).eval();
  k2.entries = 0.5 * (k2.entries + k2.entries.adjoint()).eval();
  return {std::move(k1), std::move(k2)};
}

double entropy(const std::vector<double>& eigenvalues) {
  double s = 0.0;
  for (double l : eigenvalues)
    if (l > 1e-15) s -= l * std::log(l);
  return s;
}

namespace {

struct SolvedKernel {
  std::vector<double> lambdas;  // descending, clamped at 0
  Eigen::MatrixXcd modes;       // column n: eigenvector / sqrt(w)
};

SolvedKernel solve_kernel(const KernelMatrix& k) {
  const Eigen::Index n = k.entries.rows();
  const auto& w = k.grid.weights();
  Eigen::VectorXd sw(n);
  for (Eigen::Index j = 0; j < n; ++j) sw[j] = std::sqrt(w[j]);

  Eigen::MatrixXcd a = sw.asDiagonal() * k.entries * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success) throw numeric_error("decompose: eigensolver failed");

  SolvedKernel out;
  out.lambdas.resize(n);
  out.modes.resize(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const Eigen::Index src = n - 1 - m;  // ascending -> descending
    const double lam = es.eigenvalues()[src];
    if (lam < -1e-9) throw consistency_error("decompose: kernel not positive semidefinite");
    out.lambdas[m] = std::max(lam, 0.0);
    out.modes.col(m) = es.eigenvectors().col(src).cwiseQuotient(sw.cast<std::complex<double>>());
  }
  return out;
}

// Rotate so the largest-magnitude sample is real positive.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const std::complex<double> z = v[imax];
  if (std::abs(z) > 0.0) v *= std::conj(z) / std::abs(z);
}

double first_moment(const Eigen::VectorXcd& v, const FrequencyGrid& g) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < v.size(); ++j)
    m += g.weights()[j] * g.nodes()[j] * std::norm(v[j]);
  return m;
}

}  // namespace

SchmidtDecomposition decompose(const KernelMatrix& k1, const KernelMatrix& k2,
                               const JointAmplitude& amp) {
  if (!amp.signal_grid.same_as(k1.grid) || !amp.idler_grid.same_as(k2.grid))
    throw grid_mismatch("decompose: kernels and amplitude disagree on grids");

  SolvedKernel s1 = solve_kernel(k1);
  SolvedKernel s2 = solve_kernel(k2);

  SchmidtDecomposition d;
  d.signal_grid = amp.signal_grid;
  d.idler_grid = amp.idler_grid;
  d.eigenvalues = s1.lambdas;

  // shared-spectrum consistency between the two kernels
  const std::size_t ncmp = std::min(s1.lambdas.size(), s2.lambdas.size());
  for (std::size_t m = 0; m < ncmp; ++m)
    d.spectrum_mismatch = std::max(d.spectrum_mismatch, std::abs(s1.lambdas[m] - s2.lambdas[m]));
  if (d.spectrum_mismatch > 1e-5)
    throw consistency_error("decompose: K1 and K2 spectra disagree beyond 1e-5");

  // truncation: cumulative mass 1 - 1e-6, rank capped
  const double total = std::accumulate(d.eigenvalues.begin(), d.eigenvalues.end(), 0.0);
  double cum = 0.0;
  int rank = 0;
  for (double l : d.eigenvalues) {
    cum += l;
    ++rank;
    if (cum >= total - 1e-6 || rank >= 200) break;
  }
  d.rank = rank;

  const Eigen::Index ns = amp.values.rows(), ni = amp.values.cols();
  d.signal_modes.resize(ns, rank);
  d.idler_modes.resize(ni, rank);
  Eigen::VectorXd ws = Eigen::Map<const Eigen::VectorXd>(amp.signal_grid.weights().data(), ns);

  for (int m = 0; m < rank; ++m) {
    d.signal_modes.col(m) = s1.modes.col(m);
    // deterministic order inside (near-)degenerate clusters: ascending first moment
    if (m > 0 && std::abs(d.eigenvalues[m] - d.eigenvalues[m - 1]) < 1e-9) {
      if (first_moment(d.signal_modes.col(m), d.signal_grid) <
          first_moment(d.signal_modes.col(m - 1), d.signal_grid)) {
        d.signal_modes.col(m).swap(d.signal_modes.col(m - 1));
      }
    }
  }
  for (int m = 0; m < rank; ++m) fix_phase(d.signal_modes.col(m));

  // idler partner recovered through the amplitude, which pins the relative
  // phase so the rank-sum reconstruction holds: sqrt(l) phi = f^T W_s conj(psi)
  for (int m = 0; m < rank; ++m) {
    const double lam = d.eigenvalues[m];
    Eigen::VectorXcd proj =
        amp.values.transpose() * (ws.asDiagonal() * d.signal_modes.col(m).conjugate());
    d.idler_modes.col(m) = lam > 1e-14 ? (proj / std::sqrt(lam)).eval() : proj;
  }

  for (double l : d.eigenvalues) d.purity += l * l;
  d.entropy_nats = entropy(d.eigenvalues);
  d.entropy_bits = d.entropy_nats / std::log(2.0);

  // weighted L2 residual of the retained-rank reconstruction
  {
    Eigen::VectorXcd sq(rank);
    for (int m = 0; m < rank; ++m) sq[m] = std::sqrt(d.eigenvalues[m]);
    Eigen::MatrixXcd rec = d.signal_modes * sq.asDiagonal() * d.idler_modes.transpose();
    rec -= amp.values;
    double err = 0.0;
    for (Eigen::Index j = 0; j < ns; ++j)
      for (Eigen::Index k = 0; k < ni; ++k)
        err += amp.signal_grid.weights()[j] * amp.idler_grid.weights()[k] * std::norm(rec(j, k));
    d.reconstruction_error = std::sqrt(err);
  }
  return d;
}

SchmidtDecomposition decompose(const JointAmplitude& amp) {
  auto [k1, k2] = build_kernels(amp);
  return decompose(k1, k2, amp);
}

SchmidtDecomposition SchmidtDecomposition::from_eigenvalues(std::vector<double> lambdas) {
  SchmidtDecomposition d;
  d.eigenvalues = std::move(lambdas);
  std::sort(d.eigenvalues.begin(), d.eigenvalues.end(), std::greater<>());
  d.rank = static_cast<int>(d.eigenvalues.size());
  for (double l : d.eigenvalues) d.purity += l * l;
  d.entropy_nats = entropy(d.eigenvalues);
  d.entropy_bits = d.entropy_nats / std::log(2.0);
  return d;
}

ModeProfile mode_profile(const SchmidtDecomposition& decomp, int n, KernelSide side) {
  if (n < 1 || n > decomp.rank) throw invalid_parameter("mode_profile: index out of range");
  ModeProfile p;
  if (side == KernelSide::signal) {
    p.nodes = decomp.signal_grid.nodes();
    p.values = decomp.signal_modes.col(n - 1);
  } else {
    p.nodes = decomp.idler_grid.nodes();
    p.values = decomp.idler_modes.col(n - 1);
  }
  return p;
}

}  // namespace cascade
