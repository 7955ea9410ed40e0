#include "pdirac/gauge.hpp"

#include <cmath>
#include <math.h>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "pdirac/quadrature.hpp"

namespace pdirac {

Frame build_frame(const Lattice& lattice, const IntVec& gamma, const RVector& et) {
  if (is_zero(gamma)) throw std::invalid_argument("build_frame: gamma must be nonzero");
  const RVector g = lattice.point(gamma);
  const RVector e = g / g.norm();
  if (std::abs(et.norm() - 1.0) > 1e-10) throw std::invalid_argument("build_frame: et must be a unit vector");
  if (std::abs(et.dot(e)) > 1e-10) throw std::invalid_argument("build_frame: et must be orthogonal to gamma");
  const auto n = g.size();
  Frame f;
  f.gamma = gamma;
  f.e = e;
  f.et = et;
  f.T = RMatrix::Zero(n, n);
  f.T.col(0) = et;
  f.T.col(1) = e;
  Eigen::Index filled = 2;
  for (Eigen::Index axis = 0; axis < n && filled < n; ++axis) {
    RVector v = RVector::Unit(n, axis);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < filled; ++j) v -= f.T.col(j).dot(v) * f.T.col(j);
    const double len = v.norm();
    if (len < 1e-6) continue;
    v /= len;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    f.T.col(filled++) = v;
  }
  return f;
}

double EtaSpec::value(double tau) const { return scale * smooth_step((tau - kPi) / kPi); }

double EtaSpec::derivative(double tau) const { return scale * smooth_step_derivative((tau - kPi) / kPi) / kPi; }

GaugePolynomials build_phi(const FourierField& A, const FourierField& At, const Frame& frame) {
  if (A.kind() != FieldKind::kVector || At.kind() != FieldKind::kVector)
    throw std::invalid_argument("build_phi: A and At must be vector fields");
  const Lattice& L = A.lattice();
  if (At.lattice().basis() != L.basis()) throw std::invalid_argument("build_phi: inconsistent lattices");
  const FourierField diff = A - At;
  GaugePolynomials out{FourierField::scalar(L), FourierField::scalar(L)};
  const cplx two_pi_i{0.0, kTwoPi};
  for (const auto& [N, c] : diff.coeffs()) {
    const RVector x = L.dual_point(N);
    const double n1 = x.dot(frame.et);
    const double n2 = x.dot(frame.e);
    const bool n2_zero = int_dot(N, frame.gamma) == 0;
    const bool n1_zero = std::abs(n1) <= 1e-12 * x.norm();
    if (n1_zero && n2_zero) continue;
    const double q = (n2_zero ? 0.0 : n2 * n2) + n1 * n1;
    const CVector v = c.col(0);
    const cplx a = frame.et.cast<cplx>().dot(v);  // bilinear (v, et): et is real
    const cplx b = frame.e.cast<cplx>().dot(v);
    const double m1 = n1_zero ? 0.0 : n1;
    const double m2 = n2_zero ? 0.0 : n2;
    out.phi1.set(N, (m1 * a + m2 * b) / (two_pi_i * q));
    out.phi2.set(N, -(m2 * a - m1 * b) / (two_pi_i * q));
  }
  return out;
}

double kernel_profile(const EtaSpec& eta, double r) {
  const int panels = 4 + static_cast<int>(std::ceil(std::abs(r) / 2.0));
  const auto rule = composite_gauss_legendre(kPi, kTwoPi, panels, 20);
  return rule.integrate([&](double tau) { return eta.derivative(tau) * ::j0(tau * r); });
}

namespace {

/// Same profile with a composite Simpson rule in tau, used by the
/// independent cross-check route.
double kernel_profile_simpson(const EtaSpec& eta, double r) {
  const int intervals = 2 * (100 + static_cast<int>(std::ceil(4.0 * std::abs(r))));
  const double h = kPi / intervals;
  double s = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double tau = kPi + i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += w * eta.derivative(tau) * ::j0(tau * r);
  }
  return s * h / 3.0;
}

/// int_a^b |g|. The range is cut into cells of width about `step`; a cell
/// where g changes sign is split at the root so every piece is smooth and
/// gets an order-20 Gauss-Legendre rule. Cell sums are added in cell order.
double radial_segment(const EtaSpec& eta, double a, double b, double step, int threads) {
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / step)));
  const double width = (b - a) / static_cast<double>(cells);
  std::vector<double> sums(cells);
  parallel_for(cells, threads, [&](std::size_t p) {
    const double lo = a + width * static_cast<double>(p);
    const double hi = lo + width;
    auto g = [&](double r) { return kernel_profile(eta, r); };
    auto piece = [&](double x0, double x1) {
      return composite_gauss_legendre(x0, x1, 1, 20).integrate([&](double r) { return std::abs(g(r)); });
    };
    const double glo = g(lo);
    const double ghi = g(hi);
    if (glo * ghi >= 0.0) {
      sums[p] = piece(lo, hi);
      return;
    }
    std::uintmax_t iterations = 100;
    const auto bracket = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                                           boost::math::tools::eps_tolerance<double>(50), iterations);
    const double root = 0.5 * (bracket.first + bracket.second);
    sums[p] = piece(lo, root) + piece(root, hi);
  });
  double s = 0.0;
  for (double v : sums) s += v;
  return s;
}

/// ||G||_{L1} on the disk of radius R by 2-D quadrature of
/// |x| (x^2 + y^2)^{-1} |g(sqrt(x^2 + y^2))| in polar coordinates: midpoint
/// rule in r, Gauss-Legendre per quadrant in the angle.
double kernel_l1_direct(const EtaSpec& eta, double R, double step, int angular_panels, int threads) {
  const auto count = static_cast<std::size_t>(std::ceil(R / step));
  const double dr = R / static_cast<double>(count);
  std::vector<QuadratureRule> quadrants;
  for (int q = 0; q < 4; ++q)
    quadrants.push_back(composite_gauss_legendre(q * kPi / 2.0, (q + 1) * kPi / 2.0, angular_panels, 20));
  std::vector<double> rows(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const double r = (static_cast<double>(i) + 0.5) * dr;
    const double g = std::abs(kernel_profile_simpson(eta, r));
    double s = 0.0;
    for (const auto& rule : quadrants) {
      s += rule.integrate([&](double phi) {
        const double x = r * std::cos(phi);
        const double y = r * std::sin(phi);
        return std::abs(x) / (x * x + y * y) * g * r;
      });
    }
    rows[i] = s * dr;
  });
  double s = 0.0;
  for (double v : rows) s += v;
  return s;
}

}  // namespace

KernelConstant bessel_kernel_constant(const EtaSpec& eta, const KernelQuadrature& quad) {
  if (!(quad.radial_step > 0.0) || !(quad.initial_radius > 0.0) || !(quad.cross_step > 0.0))
    throw std::invalid_argument("bessel_kernel_constant: quadrature steps must be positive");
  KernelConstant out;
  out.eta_scale = eta.scale;
  out.g0 = kernel_profile(eta, 0.0);

  double R = quad.initial_radius;
  double total = radial_segment(eta, 0.0, R, quad.radial_step, quad.threads);
  double tail = total;
  while (true) {
    const double segment = radial_segment(eta, R, 2.0 * R, quad.radial_step, quad.threads);
    total += segment;
    tail = segment;
    R *= 2.0;
    if (segment < quad.tail_tolerance * total) break;
    if (R >= quad.max_radius)
      throw std::runtime_error("bessel_kernel_constant: radial tail did not settle below max_radius");
  }
  out.radial_integral = total;
  out.truncation_radius = R;
  out.tail_estimate = tail;
  out.kernel_l1 = 4.0 * total;
  out.C = 2.0 / kPi * out.kernel_l1;

  out.C_cross = 2.0 / kPi * kernel_l1_direct(eta, R, quad.cross_step, quad.angular_panels, quad.threads);
  out.cross_residual = out.C != 0.0 ? std::abs(out.C - out.C_cross) / std::abs(out.C) : 0.0;
  return out;
}

const KernelConstant& default_kernel_constant() {
  static const KernelConstant value = bessel_kernel_constant(EtaSpec{});
  return value;
}

double c5(const FourierField& A, double gamma_length, double h, const MeasureSpec& mu, double C) {
  const double t = std::max(gamma_length, 1.0 / h);
  return std::exp(-4.0 * C * mu.norm_bound() * t * coefficient_sum(A));
}

Lemma1Report lemma1_check(const FourierField& A, const FourierField& At, const Frame& frame, const MeasureSpec& mu,
                          double h, double C, const EtaSpec& eta) {
  const Lattice& L = A.lattice();
  const double glen = L.point(frame.gamma).norm();
  Lemma1Report r;
  r.t = std::max(glen, 1.0 / h);
  r.a_sup_hi = coefficient_sum(A);
  r.bound = C * mu.norm_bound() * r.t * r.a_sup_hi;

  const auto phi = build_phi(A, At, frame);
  r.phi1 = sup_norm(phi.phi1);
  r.phi2 = sup_norm(phi.phi2);
  r.bound_ok = r.phi1.lo <= r.bound && r.phi2.lo <= r.bound;

  r.multiplier_ok = true;
  const FourierField diff = A - At;
  for (const auto& [N, c] : diff.coeffs()) {
    if (c.isZero(0.0)) continue;
    ++r.active_modes;
    const RVector x = L.dual_point(N);
    const double n1 = x.dot(frame.et);
    const double n2 = int_dot(N, frame.gamma) == 0 ? 0.0 : x.dot(frame.e);
    if (eta.value(kTwoPi * r.t * std::hypot(n1, n2)) != eta.scale) r.multiplier_ok = false;
  }
  r.passed = r.bound_ok && r.multiplier_ok;
  return r;
}

}  // namespace pdirac
