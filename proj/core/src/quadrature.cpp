#include "pdirac/quadrature.hpp"

#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace pdirac {

namespace {

template <unsigned Order>
void append_panel(double a, double b, QuadratureRule& rule) {
  using G = boost::math::quadrature::gauss<double, Order>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // Boost stores the nonnegative half of the symmetric rule; x[0] is the
  // origin for odd orders only.
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      rule.nodes.push_back(mid);
      rule.weights.push_back(half * w[i]);
      continue;
    }
    rule.nodes.push_back(mid - half * x[i]);
    rule.weights.push_back(half * w[i]);
    rule.nodes.push_back(mid + half * x[i]);
    rule.weights.push_back(half * w[i]);
  }
}

}  // namespace

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
  QuadratureRule rule;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + width * p;
    const double hi = p + 1 == panels ? b : a + width * (p + 1);
    switch (order) {
      case 8: append_panel<8>(lo, hi, rule); break;
      case 16: append_panel<16>(lo, hi, rule); break;
      case 20: append_panel<20>(lo, hi, rule); break;
      default: throw std::invalid_argument("composite_gauss_legendre: unsupported order");
    }
  }
  return rule;
}

}  // namespace pdirac
