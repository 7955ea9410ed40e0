#pragma once

#include "pdirac/fields.hpp"
#include "pdirac/measure.hpp"

namespace pdirac {

/// Orthonormal frame attached to (gamma, et): columns of T are E_1 = et,
/// E_2 = e = gamma/|gamma|, then a completion from the standard axes.
struct Frame {
  IntVec gamma;
  RVector e;
  RVector et;
  RMatrix T;

  /// Coordinates (x, E_j) of a Cartesian vector.
  RVector coordinates(const RVector& x) const { return T.transpose() * x; }
};

/// Throws std::invalid_argument when et is not a unit vector orthogonal to
/// gamma (to 1e-10 relative).
Frame build_frame(const Lattice& lattice, const IntVec& gamma, const RVector& et);

/// Cutoff eta(tau) = scale * smooth_step((tau - pi) / pi): zero below pi,
/// `scale` above 2 pi. Only scale = 1 is an admissible cutoff; other values
/// are kept for linearity checks.
struct EtaSpec {
  double scale = 1.0;

  double value(double tau) const;
  double derivative(double tau) const;
};

struct GaugePolynomials {
  FourierField phi1;
  FourierField phi2;
};

/// Scalar polynomials whose first-order derivatives in the (et, e) plane
/// reproduce A - At:
///   d1 phi1 - d2 phi2 = (A - At, et),   d2 phi1 + d1 phi2 = (A - At, e).
/// Modes with N_1 = N_2 = 0 get zero coefficients.
GaugePolynomials build_phi(const FourierField& A, const FourierField& At, const Frame& frame);

/// g(r) = int eta'(tau) J0(tau r) dtau over [pi, 2 pi].
double kernel_profile(const EtaSpec& eta, double r);

struct KernelQuadrature {
  /// Cell width in r; cells are split at sign changes of g.
  double radial_step = 0.1;
  double initial_radius = 8.0;
  double max_radius = 512.0;
  /// Stop once a doubling segment adds less than this fraction.
  double tail_tolerance = 1e-5;
  /// Angular panels per quadrant for the 2-D cross-check.
  int angular_panels = 4;
  /// Step of the midpoint rule in r for the 2-D cross-check.
  double cross_step = 0.01;
  int threads = 1;
};

struct KernelConstant {
  double C = 0.0;
  /// int_0^R |g|, the radial integral.
  double radial_integral = 0.0;
  double kernel_l1 = 0.0;  // ||G||_{L1(R^2)} = 4 int |g|
  double truncation_radius = 0.0;
  double tail_estimate = 0.0;
  double g0 = 0.0;
  /// C from direct 2-D quadrature of |G(x, y)| on the same disk.
  double C_cross = 0.0;
  double cross_residual = 0.0;  // |C - C_cross| / C
  double eta_scale = 1.0;
};

/// Throws std::runtime_error when the tail does not settle below
/// max_radius.
KernelConstant bessel_kernel_constant(const EtaSpec& eta, const KernelQuadrature& quad = {});

/// C for the default cutoff and quadrature, computed once per process.
const KernelConstant& default_kernel_constant();

/// exp(-4 C ||mu|| max{|gamma|, 1/h} hi(sup_norm(A))).
double c5(const FourierField& A, double gamma_length, double h, const MeasureSpec& mu, double C);

struct Lemma1Report {
  double t = 0.0;           // max{|gamma|, 1/h}
  double a_sup_hi = 0.0;    // coefficient-sum bound on A
  double bound = 0.0;       // C ||mu|| t hi(A)
  NormBracket phi1;
  NormBracket phi2;
  bool bound_ok = false;
  /// eta(2 pi t |(N_1, N_2)|) = 1 on every mode where A - At is nonzero.
  bool multiplier_ok = false;
  int active_modes = 0;
  bool passed = false;
};

Lemma1Report lemma1_check(const FourierField& A, const FourierField& At, const Frame& frame, const MeasureSpec& mu,
                          double h, double C, const EtaSpec& eta = {});

}  // namespace pdirac
