#include "pdirac/fiber_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdirac {

void FiberPoint::validate() const {
  if (k.size() != e.size()) throw std::invalid_argument("FiberPoint: k and e differ in dimension");
  if (std::abs(e.norm() - 1.0) > 1e-12) throw std::invalid_argument("FiberPoint: e must be a unit vector");
  if (!(kappa >= 0.0)) throw std::invalid_argument("FiberPoint: kappa must be nonnegative");
}

std::size_t IntVecHash::operator()(const IntVec& v) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int x : v) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(x));
    h *= 1099511628211ull;
  }
  return h;
}

ModeSet::ModeSet(std::vector<IntVec> modes) : modes_(std::move(modes)) {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].size() != modes_.front().size()) throw std::invalid_argument("ModeSet: mixed mode dimensions");
    if (!index_.emplace(modes_[i], static_cast<long>(i)).second)
      throw std::invalid_argument("ModeSet: duplicate mode " + to_string(modes_[i]));
  }
}

ModeSet ModeSet::within_cutoff(const Lattice& lattice, double cutoff) {
  return shifted(lattice, RVector::Zero(lattice.dimension()), cutoff);
}

ModeSet ModeSet::shifted(const Lattice& lattice, const RVector& k, double cutoff) {
  std::vector<IntVec> modes;
  for (auto& p : enumerate_shifted(kTwoPi * lattice.reciprocal(), k, cutoff)) modes.push_back(std::move(p.coords));
  return ModeSet(std::move(modes));
}

long ModeSet::index_of(const IntVec& N) const {
  auto it = index_.find(N);
  return it == index_.end() ? -1 : it->second;
}

bool ModeSet::closed_under_negation() const {
  return std::all_of(modes_.begin(), modes_.end(), [&](const IntVec& N) { return index_of(negated(N)) >= 0; });
}

CMatrix symbol(const CliffordRep& rep, const Lattice& lattice, const FiberPoint& fiber, const IntVec& N) {
  const RVector x = fiber.k + kTwoPi * lattice.dual_point(N);
  CVector c = x.cast<cplx>();
  c += cplx{0.0, fiber.kappa} * fiber.e.cast<cplx>();
  return rep.contract(c);
}

GFactors g_factors(const Lattice& lattice, const FiberPoint& fiber, const IntVec& N) {
  const RVector x = fiber.k + kTwoPi * lattice.dual_point(N);
  const double along = x.dot(fiber.e);
  const double perp = (x - along * fiber.e).norm();
  return {std::hypot(along, fiber.kappa - perp), std::hypot(along, fiber.kappa + perp)};
}

std::optional<RVector> transverse_direction(const RVector& x, const RVector& e) {
  const RVector t = x - x.dot(e) * e;
  const double len = t.norm();
  if (len <= 1e-12 * x.norm() || len == 0.0) return std::nullopt;
  RVector d = t / len;
  // Remove the residual e component so the projector sees an exact pair.
  d -= d.dot(e) * e;
  return RVector(d / d.norm());
}

CMatrix global_projection(const CliffordRep& rep, const Lattice& lattice, const RVector& k, const RVector& e,
                          const ModeSet& modes, Sign sign) {
  const auto M = rep.size();
  const auto dim = static_cast<Eigen::Index>(modes.size()) * M;
  CMatrix P = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto et = transverse_direction(k + kTwoPi * lattice.dual_point(modes[i]), e);
    if (!et) continue;
    const auto off = static_cast<Eigen::Index>(i) * M;
    P.block(off, off, M, M) = projector(e, *et, sign, rep);
  }
  return P;
}

CMatrix TruncatedDiracOperator::block(std::size_t i, std::size_t j) const {
  const auto M = rep_.size();
  return matrix_.block(static_cast<Eigen::Index>(i) * M, static_cast<Eigen::Index>(j) * M, M, M);
}

TruncatedDiracOperator assemble(const Lattice& lattice, const CliffordRep& rep, const ModeSet& modes,
                                const FiberPoint& fiber, const PotentialSet& pot) {
  fiber.validate();
  if (rep.dimension() != lattice.dimension() || fiber.k.size() != lattice.dimension())
    throw std::invalid_argument("assemble: dimension mismatch between lattice, representation and fiber");
  if (modes.size() == 0) throw std::invalid_argument("assemble: empty mode set");
  if (static_cast<int>(modes[0].size()) != lattice.dimension())
    throw std::invalid_argument("assemble: mode dimension does not match the lattice");
  if (pot.rep.size() != rep.size()) throw std::invalid_argument("assemble: potential representation mismatch");

  TruncatedDiracOperator op;
  op.lattice_ = lattice;
  op.rep_ = rep;
  op.modes_ = modes;
  op.fiber_ = fiber;

  const FourierField V = pot.composite();
  double window = 0.0;
  for (const IntVec& N : modes.modes()) window = std::max(window, kTwoPi * lattice.dual_point(N).norm());
  if (V.support_radius() > 2.0 * window) {
    std::ostringstream msg;
    msg << "potential support radius " << V.support_radius() << " exceeds twice the mode window " << window
        << "; the truncation clips the convolution";
    op.warnings_.push_back(msg.str());
  }

  const auto M = rep.size();
  const auto count = modes.size();
  op.matrix_ = CMatrix::Zero(static_cast<Eigen::Index>(count) * M, static_cast<Eigen::Index>(count) * M);
  for (std::size_t i = 0; i < count; ++i) {
    const auto ri = static_cast<Eigen::Index>(i) * M;
    op.matrix_.block(ri, ri, M, M) = symbol(rep, lattice, fiber, modes[i]);
  }
  if (!V.empty()) {
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        auto it = V.coeffs().find(modes[i] - modes[j]);
        if (it == V.coeffs().end()) continue;
        op.matrix_.block(static_cast<Eigen::Index>(i) * M, static_cast<Eigen::Index>(j) * M, M, M) += it->second;
      }
    }
  }
  return op;
}

double hermitian_defect(const CMatrix& H) {
  const double scale = H.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (H - H.adjoint()).cwiseAbs().maxCoeff() / scale;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& H) {
  if (hermitian_defect(H) > 1e-12)
    throw std::invalid_argument("eigenvalues: matrix is not Hermitian; use the singular-value path");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: eigensolver did not converge");
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> eigenvalues(const TruncatedDiracOperator& op) { return hermitian_eigenvalues(op.matrix()); }

double smallest_singular_value(const CMatrix& H, Eigen::Index dense_limit) {
  if (H.rows() > dense_limit || H.cols() > dense_limit)
    throw std::invalid_argument("sigma_min: dimension " + std::to_string(std::max(H.rows(), H.cols())) +
                                " exceeds the dense limit " + std::to_string(dense_limit) +
                                "; lower the cutoff");
  if (H.size() == 0) throw std::invalid_argument("sigma_min: empty matrix");
  const CMatrix normal = H.adjoint() * H;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(normal, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sigma_min: eigensolver did not converge");
  const double lo = solver.eigenvalues()(0);
  const double hi = solver.eigenvalues()(solver.eigenvalues().size() - 1);
  if (lo > 1e-8 * hi) return std::sqrt(lo);
  Eigen::BDCSVD<CMatrix> svd(H);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double sigma_min(const TruncatedDiracOperator& op, Eigen::Index dense_limit) {
  return smallest_singular_value(op.matrix(), dense_limit);
}

double weighted_sigma_min(const TruncatedDiracOperator& op, const std::vector<double>& weights,
                          Eigen::Index dense_limit) {
  if (weights.size() != op.modes().size())
    throw std::invalid_argument("weighted_sigma_min: one weight per mode is required");
  const auto M = op.rep().size();
  CMatrix scaled = op.matrix();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("weighted_sigma_min: weight for mode " + to_string(op.modes()[i]) +
                                  " must be positive");
    scaled.middleCols(static_cast<Eigen::Index>(i) * M, M) /= weights[i];
  }
  return smallest_singular_value(scaled, dense_limit);
}

std::vector<double> g_minus_weights(const TruncatedDiracOperator& op) {
  std::vector<double> w;
  w.reserve(op.modes().size());
  for (const IntVec& N : op.modes().modes()) w.push_back(g_factors(op.lattice(), op.fiber(), N).minus);
  return w;
}

double free_sigma_min(const Lattice& lattice, const FiberPoint& fiber, const ModeSet& modes) {
  double s = std::numeric_limits<double>::infinity();
  for (const IntVec& N : modes.modes()) s = std::min(s, g_factors(lattice, fiber, N).minus);
  return s;
}

double default_cutoff(const Lattice& lattice, double kappa, double w) {
  return 3.0 * (std::abs(kappa) + w) + kTwoPi * lattice.shortest_dual_length();
}

}  // namespace pdirac
