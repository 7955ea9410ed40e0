#pragma once

#include <limits>

namespace pdirac {

/// C-infinity step: 0 for s <= 0, 1 for s >= 1, f(s)/(f(s)+f(1-s)) between
/// with f(s) = exp(-1/s).
double smooth_step(double s);
double smooth_step_derivative(double s);

enum class MeasureKind { kDirac, kPlateau };

/// A signed even measure on the real line, represented through its
/// transform mu^(p) = int e^{ipt} dmu(t).
///
/// dirac:   mu^ = 1 everywhere, ||mu|| = 1. It belongs to every class M_h;
///          h defaults to +inf so that max{|gamma|, 1/h} = |gamma|.
/// plateau: mu^(p) = 1 - smooth_step((|p| - 2 pi h) / (2 pi (h1 - h))),
///          equal to 1 on |p| <= 2 pi h and 0 on |p| >= 2 pi h1. The total
///          variation is estimated by integrating |density| numerically.
class MeasureSpec {
 public:
  static MeasureSpec dirac(double h = std::numeric_limits<double>::infinity());
  /// Requires 0 < h < h1.
  static MeasureSpec plateau(double h, double h1);

  MeasureKind kind() const { return kind_; }
  double h() const { return h_; }
  double h1() const { return h1_; }

  double transform(double p) const;
  /// sup_p |mu^(p)|.
  double transform_sup() const { return 1.0; }
  /// ||mu||, at least 1.
  double norm_bound() const { return norm_; }
  /// Truncation radius used for the total-variation estimate (0 for dirac).
  double norm_truncation() const { return norm_truncation_; }

  /// Density (1/2pi) int mu^(p) e^{-ipt} dp of the plateau measure.
  double density(double t) const;

 private:
  MeasureKind kind_ = MeasureKind::kDirac;
  double h_ = std::numeric_limits<double>::infinity();
  double h1_ = std::numeric_limits<double>::infinity();
  double norm_ = 1.0;
  double norm_truncation_ = 0.0;
};

}  // namespace pdirac
