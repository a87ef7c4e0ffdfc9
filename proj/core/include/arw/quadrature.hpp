#pragma once

#include <vector>

namespace arw {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
QuadratureRule gauss_legendre(int n);

/// `panels` equal panels on [a, b], each carrying an `order`-point rule.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order = 16);

/// Composite rule on [a, b] with at least `min_nodes` nodes in 16-point panels.
QuadratureRule composite_with_nodes(double a, double b, int min_nodes);

}  // namespace arw
