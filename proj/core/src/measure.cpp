#include "pdirac/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdirac/quadrature.hpp"
#include "pdirac/types.hpp"

namespace pdirac {

namespace {

double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = bump(s);
  const double b = bump(1.0 - s);
  return a / (a + b);
}

double smooth_step_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = bump(s);
  const double b = bump(1.0 - s);
  const double da = a / (s * s);
  const double db = -b / ((1.0 - s) * (1.0 - s));
  const double den = a + b;
  return (da * den - a * (da + db)) / (den * den);
}

MeasureSpec MeasureSpec::dirac(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("MeasureSpec::dirac: h must be positive");
  MeasureSpec m;
  m.kind_ = MeasureKind::kDirac;
  m.h_ = h;
  return m;
}

MeasureSpec MeasureSpec::plateau(double h, double h1) {
  if (!(h > 0.0) || !(h1 > h) || !std::isfinite(h1))
    throw std::invalid_argument("MeasureSpec::plateau: requires 0 < h < h1 < inf");
  MeasureSpec m;
  m.kind_ = MeasureKind::kPlateau;
  m.h_ = h;
  m.h1_ = h1;

  // Total variation: 2 int_0^T |density|, trapezoid on a grid resolving the
  // oscillation period 1/h1. The density decays faster than any power; T is
  // chosen so that the discarded tail is below ~1e-10.
  const double T = 50.0 / (h1 - h);
  const double dt = 0.02 / h1;
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt));
  double acc = 0.0;
  double prev = std::abs(m.density(0.0));
  for (std::size_t i = 1; i <= steps; ++i) {
    const double cur = std::abs(m.density(dt * static_cast<double>(i)));
    acc += 0.5 * dt * (prev + cur);
    prev = cur;
  }
  m.norm_ = std::max(1.0, 2.0 * acc);
  m.norm_truncation_ = dt * static_cast<double>(steps);
  return m;
}

double MeasureSpec::transform(double p) const {
  if (kind_ == MeasureKind::kDirac) return 1.0;
  const double a = kTwoPi * h_;
  const double b = kTwoPi * h1_;
  return 1.0 - smooth_step((std::abs(p) - a) / (b - a));
}

double MeasureSpec::density(double t) const {
  if (kind_ != MeasureKind::kPlateau) throw std::logic_error("MeasureSpec::density: only plateau measures have one");
  const double a = kTwoPi * h_;
  const double b = kTwoPi * h1_;
  t = std::abs(t);
  const double plateau = t == 0.0 ? a / kPi : std::sin(a * t) / (kPi * t);
  // Transition part on [a, b]; two panels per oscillation of cos(pt).
  const int panels = std::max(4, static_cast<int>(std::ceil((b - a) * t / kPi)) + 2);
  const auto rule = composite_gauss_legendre(a, b, panels, 16);
  const double tail = rule.integrate([&](double p) { return transform(p) * std::cos(p * t); });
  return plateau + tail / kPi;
}

}  // namespace pdirac
