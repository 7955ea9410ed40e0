#pragma once

#include <vector>

namespace pdirac {

/// Nodes and weights of a fixed quadrature rule on an interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Composite Gauss-Legendre rule with `panels` equal panels on [a, b].
/// `order` is one of 8, 16, 20.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order = 16);

}  // namespace pdirac
