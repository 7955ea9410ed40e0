#include "pdirac/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdirac {

RMatrix reciprocal_basis(const RMatrix& basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0)
    throw std::invalid_argument("reciprocal_basis: basis must be a nonempty square matrix");
  double scale = 1.0;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) scale *= basis.col(j).norm();
  const double det = basis.determinant();
  if (!(std::abs(det) > 1e-12 * scale)) throw std::invalid_argument("reciprocal_basis: basis is singular");
  return basis.inverse().transpose();
}

Lattice::Lattice(RMatrix basis) : basis_(std::move(basis)) {
  reciprocal_ = reciprocal_basis(basis_);
  cell_volume_ = std::abs(basis_.determinant());
  auto shortest = [](const RMatrix& b) {
    double r = b.col(0).norm();
    for (Eigen::Index j = 1; j < b.cols(); ++j) r = std::min(r, b.col(j).norm());
    return enumerate_points(b, r).front().norm;
  };
  shortest_ = shortest(basis_);
  shortest_dual_ = shortest(reciprocal_);
}

Lattice Lattice::cubic(int n) { return Lattice(RMatrix::Identity(n, n)); }

RVector Lattice::point(const IntVec& m) const {
  RVector v = RVector::Zero(dimension());
  for (int j = 0; j < dimension(); ++j) v += static_cast<double>(m[static_cast<std::size_t>(j)]) * basis_.col(j);
  return v;
}

RVector Lattice::dual_point(const IntVec& n) const {
  RVector v = RVector::Zero(dimension());
  for (int j = 0; j < dimension(); ++j)
    v += static_cast<double>(n[static_cast<std::size_t>(j)]) * reciprocal_.col(j);
  return v;
}

std::vector<LatticePoint> enumerate_shifted(const RMatrix& basis, const RVector& shift, double radius) {
  const auto n = static_cast<std::size_t>(basis.cols());
  std::vector<LatticePoint> out;
  if (!(radius >= 0.0)) return out;
  const RMatrix inv = basis.inverse();
  const RVector center = -(inv * shift);
  IntVec lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double half = radius * inv.row(static_cast<Eigen::Index>(j)).norm();
    lo[j] = static_cast<int>(std::floor(center(static_cast<Eigen::Index>(j)) - half)) - 1;
    hi[j] = static_cast<int>(std::ceil(center(static_cast<Eigen::Index>(j)) + half)) + 1;
  }
  IntVec m = lo;
  while (true) {
    RVector cart = RVector::Zero(basis.rows());
    for (std::size_t j = 0; j < n; ++j) cart += static_cast<double>(m[j]) * basis.col(static_cast<Eigen::Index>(j));
    const double norm = (shift + cart).norm();
    if (norm <= radius) out.push_back({m, std::move(cart), norm});
    std::size_t j = 0;
    while (j < n && ++m[j] > hi[j]) {
      m[j] = lo[j];
      ++j;
    }
    if (j == n) break;
  }
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return a.coords < b.coords;
  });
  return out;
}

std::vector<LatticePoint> enumerate_points(const RMatrix& basis, double radius) {
  auto pts = enumerate_shifted(basis, RVector::Zero(basis.rows()), radius);
  std::erase_if(pts, [](const LatticePoint& p) { return is_zero(p.coords); });
  return pts;
}

namespace {

void require_annulus(double kappa, double beta) {
  if (!(beta > 0.0) || !(kappa > beta)) throw std::invalid_argument("k_beta_set: requires kappa > beta > 0");
}

bool in_slab_annulus(const RVector& x, const RVector& e, double kappa, double beta) {
  const double along = x.dot(e);
  const double perp = (x - along * e).norm();
  return std::abs(along) < beta && std::abs(kappa - perp) < beta;
}

}  // namespace

std::vector<IntVec> k_beta_set(const Lattice& lattice, const RVector& k, const RVector& e, double kappa,
                               double beta, const std::vector<IntVec>& window) {
  require_annulus(kappa, beta);
  std::vector<IntVec> out;
  for (const IntVec& N : window)
    if (in_slab_annulus(k + kTwoPi * lattice.dual_point(N), e, kappa, beta)) out.push_back(N);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IntVec> k_beta_set(const Lattice& lattice, const RVector& k, const RVector& e, double kappa,
                               double beta, double cutoff) {
  require_annulus(kappa, beta);
  std::vector<IntVec> window;
  for (auto& p : enumerate_shifted(kTwoPi * lattice.reciprocal(), RVector::Zero(lattice.dimension()), cutoff))
    window.push_back(std::move(p.coords));
  return k_beta_set(lattice, k, e, kappa, beta, window);
}

std::vector<IntVec> k_beta_set(const Lattice& lattice, const RVector& k, const RVector& e, double kappa,
                               double beta) {
  require_annulus(kappa, beta);
  const double radius = std::hypot(beta, kappa + beta);
  std::vector<IntVec> window;
  for (auto& p : enumerate_shifted(kTwoPi * lattice.reciprocal(), k, radius)) window.push_back(std::move(p.coords));
  return k_beta_set(lattice, k, e, kappa, beta, window);
}

SphereMeasure::SphereMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (std::abs(a.direction.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("SphereMeasure: atom direction is not a unit vector");
    if (!(a.weight >= 0.0)) throw std::invalid_argument("SphereMeasure: atom weight must be nonnegative");
  }
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) {
    for (Eigen::Index i = 0; i < a.direction.size(); ++i)
      if (a.direction(i) != b.direction(i)) return a.direction(i) < b.direction(i);
    return a.weight < b.weight;
  });
  for (const Atom& a : atoms_) total_ += a.weight;
}

double SphereMeasure::slab(const RVector& v, double h) const {
  double s = 0.0;
  for (const Atom& a : atoms_)
    if (std::abs(a.direction.dot(v)) <= h) s += a.weight;
  return s;
}

GammaCertificate evaluate_gamma(const Lattice& lattice, const LatticePoint& gamma, const SphereMeasure& mu, double h,
                                double R0, const std::vector<LatticePoint>& dual_window, double window_radius) {
  const double expo = 1.0 / (lattice.dimension() - 1);
  const double scale = std::pow(R0, expo);
  GammaCertificate c;
  c.gamma = gamma.coords;
  c.gamma_cart = gamma.cart;
  c.length = gamma.norm;
  c.R0 = R0;
  c.h = h;
  c.slab_weight = mu.slab(gamma.cart, h);
  c.total_weight = mu.total();
  const double factor = std::max(h, 1.0 / scale) / gamma.norm;
  c.slab_ratio = c.total_weight > 0.0 ? (c.slab_weight / c.total_weight) / factor : 0.0;
  c.orth_window = window_radius;
  for (const LatticePoint& p : dual_window) {
    if (int_dot(p.coords, gamma.coords) == 0) {
      c.min_orth_length = p.norm;
      c.min_orth = p.norm / scale;
      c.min_orth_vector = p.coords;
      break;
    }
  }
  return c;
}

GammaCheck check_gamma(const Lattice& lattice, const IntVec& gamma, const SphereMeasure& mu, double h, double R0,
                       double c1, double c2) {
  if (static_cast<int>(gamma.size()) != lattice.dimension())
    throw std::invalid_argument("check_gamma: gamma has wrong dimension");
  if (is_zero(gamma)) throw std::invalid_argument("check_gamma: gamma must be nonzero");
  if (!(h > 0.0)) throw std::invalid_argument("check_gamma: h must be positive");
  const double scale = std::pow(R0, 1.0 / (lattice.dimension() - 1));
  const double window = std::max(2.0 * c1 * scale, 10.0 * lattice.shortest_dual_length());
  const auto dual = enumerate_points(lattice.reciprocal(), window);
  LatticePoint gp{gamma, lattice.point(gamma), 0.0};
  gp.norm = gp.cart.norm();

  GammaCheck out;
  out.certificate = evaluate_gamma(lattice, gp, mu, h, R0, dual, window);
  out.length_ok = gp.norm <= R0;
  out.orthogonal_ok = out.certificate.min_orth > c1;
  out.slab_ok = out.certificate.slab_ratio <= c2;
  out.passed = out.length_ok && out.orthogonal_ok && out.slab_ok;
  return out;
}

bool better_candidate(const GammaCertificate& a, const GammaCertificate& b) {
  if (a.slab_ratio != b.slab_ratio) return a.slab_ratio < b.slab_ratio;
  if (a.min_orth != b.min_orth) return a.min_orth > b.min_orth;
  if (a.length != b.length) return a.length < b.length;
  return a.gamma < b.gamma;
}

GammaCertificate find_gamma(const Lattice& lattice, const SphereMeasure& mu, double h, double R0,
                            double search_window, int threads) {
  if (!(h > 0.0)) throw std::invalid_argument("find_gamma: h must be positive");
  const auto candidates = enumerate_points(lattice.basis(), R0);
  if (candidates.empty()) throw std::invalid_argument("find_gamma: R0 is below the shortest lattice vector");
  const double window = search_window > 0.0 ? search_window : 10.0 * lattice.shortest_dual_length();
  const auto dual = enumerate_points(lattice.reciprocal(), window);

  std::vector<GammaCertificate> certs(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    certs[i] = evaluate_gamma(lattice, candidates[i], mu, h, R0, dual, window);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < certs.size(); ++i)
    if (better_candidate(certs[i], certs[best])) best = i;
  return certs[best];
}

}  // namespace pdirac
