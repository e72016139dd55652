#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cascade {

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Quadrature grid over a symmetric detuning interval [-extent, extent]
/// (units of the natural decay rate). Nodes are strictly increasing, weights
/// positive, and the node set is closed under negation.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;

  /// Composite Gauss-Legendre grid: |w| < core_halfwidth is covered with
  /// panels sized for node spacing ~core_spacing, the rest out to `extent`
  /// with spacing ~tail_spacing. Built on [0, extent] and mirrored.
  static FrequencyGrid composite(double extent, double core_halfwidth,
                                 double core_spacing, double tail_spacing,
                                 int points_per_panel = 4);

  /// Uniform trapezoid grid (mainly for independent cross-checks).
  static FrequencyGrid trapezoid(double extent, std::size_t n);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::string& scheme() const { return scheme_; }
  std::size_t size() const { return nodes_.size(); }
  double extent() const { return nodes_.empty() ? 0.0 : -nodes_.front(); }

  bool same_as(const FrequencyGrid& other, double tol = 1e-12) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::string scheme_;

  void check() const;  // throws invalid_parameter on broken invariants
};

}  // namespace cascade
