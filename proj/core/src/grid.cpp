#include "cascade/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cascade/errors.hpp"

namespace cascade {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw invalid_parameter("gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, refined by Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

namespace {

void add_region(double a, double b, double spacing, int pts,
                std::vector<double>& nodes, std::vector<double>& weights) {
  if (b <= a) return;
  std::vector<double> gx, gw;
  gauss_legendre(pts, gx, gw);
  const int npanels = std::max<int>(1, static_cast<int>(std::ceil((b - a) / (spacing * pts))));
  const double h = (b - a) / npanels;
  for (int p = 0; p < npanels; ++p) {
    const double lo = a + p * h;
    for (int k = 0; k < pts; ++k) {
      nodes.push_back(lo + 0.5 * h * (gx[k] + 1.0));
      weights.push_back(0.5 * h * gw[k]);
    }
  }
}

}  // namespace

FrequencyGrid FrequencyGrid::composite(double extent, double core_halfwidth,
                                       double core_spacing, double tail_spacing,
                                       int points_per_panel) {
  if (extent <= 0.0 || core_spacing <= 0.0 || tail_spacing <= 0.0 || points_per_panel < 2)
    throw invalid_parameter("FrequencyGrid::composite: bad grid spec");
  core_halfwidth = std::min(core_halfwidth, extent);

  std::vector<double> pos, wpos;
  add_region(0.0, core_halfwidth, core_spacing, points_per_panel, pos, wpos);
  add_region(core_halfwidth, extent, tail_spacing, points_per_panel, pos, wpos);

  FrequencyGrid g;
  g.nodes_.reserve(2 * pos.size());
  g.weights_.reserve(2 * pos.size());
  for (std::size_t i = pos.size(); i-- > 0;) {
    g.nodes_.push_back(-pos[i]);
    g.weights_.push_back(wpos[i]);
  }
  for (std::size_t i = 0; i < pos.size(); ++i) {
    g.nodes_.push_back(pos[i]);
    g.weights_.push_back(wpos[i]);
  }
  g.scheme_ = "composite-gauss-legendre";
  g.check();
  return g;
}

FrequencyGrid FrequencyGrid::trapezoid(double extent, std::size_t n) {
  if (extent <= 0.0 || n < 3) throw invalid_parameter("FrequencyGrid::trapezoid: bad spec");
  if (n % 2 == 0) ++n;  // keep the node set symmetric about 0
  FrequencyGrid g;
  const double h = 2.0 * extent / (n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    g.nodes_.push_back(-extent + h * i);
    g.weights_.push_back((i == 0 || i + 1 == n) ? 0.5 * h : h);
  }
  g.scheme_ = "trapezoid";
  g.check();
  return g;
}

bool FrequencyGrid::same_as(const FrequencyGrid& other, double tol) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (std::abs(nodes_[i] - other.nodes_[i]) > tol) return false;
  return true;
}

void FrequencyGrid::check() const {
  if (nodes_.size() != weights_.size() || nodes_.empty())
    throw invalid_parameter("FrequencyGrid: node/weight count mismatch");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (weights_[i] <= 0.0) throw invalid_parameter("FrequencyGrid: non-positive weight");
    if (i > 0 && nodes_[i] <= nodes_[i - 1])
      throw invalid_parameter("FrequencyGrid: nodes not strictly increasing");
  }
  // symmetric about 0: node set closed under negation
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double mirror = -nodes_[n - 1 - i];
    const double scale = std::max(1.0, std::abs(nodes_[i]));
    if (std::abs(nodes_[i] - mirror) > 1e-9 * scale)
      throw invalid_parameter("FrequencyGrid: node set not symmetric about 0");
  }
}

}  // namespace cascade
