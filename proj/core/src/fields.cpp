#include "pdirac/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pdirac {

FourierField::FourierField(Lattice lattice, FieldKind kind, int width) : lattice_(std::move(lattice)), kind_(kind) {
  switch (kind) {
    case FieldKind::kScalar: rows_ = cols_ = 1; break;
    case FieldKind::kVector:
      rows_ = lattice_.dimension();
      cols_ = 1;
      if (width != lattice_.dimension()) throw std::invalid_argument("FourierField: vector width must equal n");
      break;
    case FieldKind::kMatrix: rows_ = cols_ = width; break;
  }
}

void FourierField::check_shape(const CMatrix& value) const {
  if (value.rows() != rows_ || value.cols() != cols_)
    throw std::invalid_argument("FourierField: coefficient has the wrong shape");
}

void FourierField::set(const IntVec& N, CMatrix value) {
  if (static_cast<int>(N.size()) != lattice_.dimension())
    throw std::invalid_argument("FourierField: mode has the wrong dimension");
  check_shape(value);
  coeffs_[N] = std::move(value);
}

void FourierField::add(const IntVec& N, const CMatrix& value) {
  check_shape(value);
  auto it = coeffs_.find(N);
  if (it == coeffs_.end())
    set(N, value);
  else
    it->second += value;
}

CMatrix FourierField::coeff(const IntVec& N) const {
  auto it = coeffs_.find(N);
  if (it == coeffs_.end()) return CMatrix::Zero(rows_, cols_);
  return it->second;
}

void FourierField::prune() {
  std::erase_if(coeffs_, [](const auto& kv) { return kv.second.isZero(0.0); });
}

double FourierField::support_radius() const {
  double r = 0.0;
  for (const auto& [N, c] : coeffs_) r = std::max(r, kTwoPi * lattice_.dual_point(N).norm());
  return r;
}

bool FourierField::is_real_valued(double tol) const {
  for (const auto& [N, c] : coeffs_)
    if ((coeff(negated(N)) - c.conjugate()).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

bool FourierField::is_hermitian_valued(double tol) const {
  if (kind_ != FieldKind::kMatrix) return false;
  for (const auto& [N, c] : coeffs_)
    if ((coeff(negated(N)) - c.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

CMatrix FourierField::evaluate(const RVector& x) const {
  CMatrix out = CMatrix::Zero(rows_, cols_);
  for (const auto& [N, c] : coeffs_) {
    const double phase = kTwoPi * lattice_.dual_point(N).dot(x);
    out += std::polar(1.0, phase) * c;
  }
  return out;
}

FourierField FourierField::scaled(cplx s) const {
  FourierField out = *this;
  for (auto& [N, c] : out.coeffs_) c *= s;
  return out;
}

FourierField FourierField::operator+(const FourierField& other) const {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw std::invalid_argument("FourierField: shape mismatch");
  if (!other.lattice_.basis().isApprox(lattice_.basis(), 0.0) && other.lattice_.basis() != lattice_.basis())
    throw std::invalid_argument("FourierField: lattice mismatch");
  FourierField out = *this;
  for (const auto& [N, c] : other.coeffs_) out.add(N, c);
  return out;
}

FourierField FourierField::operator-(const FourierField& other) const { return *this + other.scaled(-1.0); }

FourierField FourierField::component(int j) const {
  if (kind_ != FieldKind::kVector) throw std::invalid_argument("FourierField::component: not a vector field");
  FourierField out = scalar(lattice_);
  for (const auto& [N, c] : coeffs_) out.set(N, c(j, 0));
  return out;
}

double pointwise_norm(const CMatrix& value, FieldKind kind) {
  switch (kind) {
    case FieldKind::kScalar: return std::abs(value(0, 0));
    case FieldKind::kVector: return value.norm();
    case FieldKind::kMatrix: {
      if (value.isZero(0.0)) return 0.0;
      Eigen::JacobiSVD<CMatrix> svd(value);
      return svd.singularValues()(0);
    }
  }
  return 0.0;
}

double coefficient_sum(const FourierField& field) {
  double s = 0.0;
  for (const auto& [N, c] : field.coeffs()) s += pointwise_norm(c, field.kind());
  return s;
}

namespace {

int span_grid(const std::vector<IntVec>& modes, int n) {
  int span = 0;
  for (int j = 0; j < n; ++j) {
    int lo = 0, hi = 0;
    for (const IntVec& N : modes) {
      lo = std::min(lo, N[static_cast<std::size_t>(j)]);
      hi = std::max(hi, N[static_cast<std::size_t>(j)]);
    }
    span = std::max(span, hi - lo);
  }
  return std::max(4, 2 * span + 1);
}

std::size_t grid_points(int g, int n) {
  std::size_t total = 1;
  for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(g);
  return total;
}

/// points x modes matrix of e^{2 pi i (N, x)} on the uniform grid.
CMatrix phase_matrix(const std::vector<IntVec>& modes, int g, int n) {
  const std::size_t total = grid_points(g, n);
  CMatrix P(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(modes.size()));
  std::vector<cplx> roots(static_cast<std::size_t>(g));
  for (int r = 0; r < g; ++r) roots[static_cast<std::size_t>(r)] = std::polar(1.0, kTwoPi * r / g);
  IntVec idx(static_cast<std::size_t>(n), 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t m = 0; m < modes.size(); ++m) {
      long long s = 0;
      for (std::size_t j = 0; j < idx.size(); ++j) s += static_cast<long long>(modes[m][j]) * idx[j];
      s %= g;
      if (s < 0) s += g;
      P(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) = roots[static_cast<std::size_t>(s)];
    }
    for (std::size_t j = 0; j < idx.size() && ++idx[j] == g; ++j) idx[j] = 0;
  }
  return P;
}

}  // namespace

int default_grid(const FourierField& field) {
  std::vector<IntVec> modes;
  for (const auto& [N, c] : field.coeffs()) modes.push_back(N);
  return span_grid(modes, field.lattice().dimension());
}

std::vector<CMatrix> evaluate_grid(const FourierField& field, int grid_per_axis) {
  const int n = field.lattice().dimension();
  std::vector<IntVec> modes;
  for (const auto& [N, c] : field.coeffs()) modes.push_back(N);
  const std::size_t total = grid_points(grid_per_axis, n);
  std::vector<CMatrix> out(total, CMatrix::Zero(field.rows(), field.cols()));
  if (modes.empty()) return out;
  const CMatrix P = phase_matrix(modes, grid_per_axis, n);
  std::size_t m = 0;
  for (const auto& [N, c] : field.coeffs()) {
    for (std::size_t p = 0; p < total; ++p)
      out[p] += P(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(m)) * c;
    ++m;
  }
  return out;
}

NormBracket sup_norm(const FourierField& field, int grid_per_axis) {
  NormBracket b;
  b.hi = coefficient_sum(field);
  if (field.empty()) return b;
  const int g = grid_per_axis > 0 ? grid_per_axis : default_grid(field);
  for (const CMatrix& v : evaluate_grid(field, g)) b.lo = std::max(b.lo, pointwise_norm(v, field.kind()));
  return b;
}

FourierField averaged_potential(const FourierField& A, const IntVec& gamma, const MeasureSpec& mu,
                                const RVector& et) {
  const Lattice& L = A.lattice();
  if (is_zero(gamma)) throw std::invalid_argument("averaged_potential: gamma must be nonzero");
  const RVector g = L.point(gamma);
  if (std::abs(et.norm() - 1.0) > 1e-10 || std::abs(et.dot(g)) > 1e-10 * g.norm())
    throw std::invalid_argument("averaged_potential: et must be a unit vector orthogonal to gamma");
  FourierField out(L, A.kind(), static_cast<int>(A.rows()));
  for (const auto& [N, c] : A.coeffs()) {
    if (int_dot(N, gamma) != 0) continue;
    out.set(N, mu.transform(kTwoPi * L.dual_point(N).dot(et)) * c);
  }
  return out;
}

RMatrix orthogonal_complement(const RVector& e) {
  const auto n = e.size();
  RMatrix basis(n, n);
  basis.col(0) = e;
  Eigen::Index filled = 1;
  for (Eigen::Index axis = 0; axis < n && filled < n; ++axis) {
    RVector v = RVector::Unit(n, axis);
    for (Eigen::Index j = 0; j < filled; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    // Second pass keeps the completion orthogonal to rounding.
    for (Eigen::Index j = 0; j < filled; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    const double len = v.norm();
    if (len < 1e-6) continue;
    v /= len;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    basis.col(filled++) = v;
  }
  return basis.rightCols(n - 1);
}

namespace {

double halton(std::size_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::size_t>(base));
    index /= static_cast<std::size_t>(base);
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

RVector project_transverse(const RVector& v, const RVector& e) {
  RVector w = v - v.dot(e) * e;
  return w / w.norm();
}

}  // namespace

std::vector<RVector> sample_transverse(const RVector& e, int samples) {
  const RMatrix comp = orthogonal_complement(e);
  const auto m = comp.cols();
  std::vector<RVector> out;
  out.reserve(static_cast<std::size_t>(samples));
  if (m == 1) {
    out.assign(static_cast<std::size_t>(std::max(samples, 1)), comp.col(0));
    for (int i = 1; i < samples; i += 2) out[static_cast<std::size_t>(i)] = -comp.col(0);
    return out;
  }
  if (m == 2) {
    for (int i = 0; i < samples; ++i) {
      const double phi = kTwoPi * i / samples;
      out.push_back(std::cos(phi) * comp.col(0) + std::sin(phi) * comp.col(1));
    }
    return out;
  }
  if (m > static_cast<Eigen::Index>(std::size(kPrimes)))
    throw std::invalid_argument("sample_transverse: dimension too large");
  for (int i = 0; i < samples; ++i) {
    RVector z(m);
    for (Eigen::Index j = 0; j < m; j += 2) {
      const double u1 = std::max(halton(static_cast<std::size_t>(i) + 1, kPrimes[j]), 1e-300);
      const double u2 = halton(static_cast<std::size_t>(i) + 1, kPrimes[(j + 1) % std::size(kPrimes)]);
      const double r = std::sqrt(-2.0 * std::log(u1));
      z(j) = r * std::cos(kTwoPi * u2);
      if (j + 1 < m) z(j + 1) = r * std::sin(kTwoPi * u2);
    }
    out.push_back((comp * z).normalized());
  }
  return out;
}

namespace {

/// Sup-norm lower estimate of the condition field for one direction et on a
/// fixed set of surviving modes.
struct ConditionEvaluator {
  const Lattice& lattice;
  const MeasureSpec& mu;
  const RVector& e;
  const std::vector<IntVec>& modes;
  const std::vector<CVector>& coeffs;
  ConditionForm form;

  double operator()(const RVector& et, const CMatrix& P) const {
    const auto S = static_cast<Eigen::Index>(modes.size());
    if (form == ConditionForm::kTransverse) {
      CVector c(S);
      for (Eigen::Index m = 0; m < S; ++m) {
        const auto& a = coeffs[static_cast<std::size_t>(m)];
        const double w = mu.transform(kTwoPi * lattice.dual_point(modes[static_cast<std::size_t>(m)]).dot(et));
        c(m) = w * (et.cast<cplx>().dot(a) + cplx{0, 1} * e.cast<cplx>().dot(a));
      }
      return (P * c).cwiseAbs().maxCoeff();
    }
    const auto n = static_cast<Eigen::Index>(e.size());
    CMatrix C(S, n);
    for (Eigen::Index m = 0; m < S; ++m) {
      const double w = mu.transform(kTwoPi * lattice.dual_point(modes[static_cast<std::size_t>(m)]).dot(et));
      C.row(m) = w * coeffs[static_cast<std::size_t>(m)].transpose();
    }
    return (P * C).rowwise().norm().maxCoeff();
  }
};

}  // namespace

ConditionBracket condition_value(const FourierField& A, const IntVec& gamma, const MeasureSpec& mu,
                                 int sphere_samples, ConditionForm form, int grid_per_axis) {
  if (A.kind() != FieldKind::kVector) throw std::invalid_argument("condition_value: A must be a vector field");
  if (A.mean().norm() > 1e-12) throw std::invalid_argument("condition_value: A must have zero mean");
  if (is_zero(gamma)) throw std::invalid_argument("condition_value: gamma must be nonzero");
  const Lattice& L = A.lattice();
  const int n = L.dimension();
  const RVector g = L.point(gamma);
  const double glen = g.norm();
  const RVector e = g / glen;

  std::vector<IntVec> modes;
  std::vector<CVector> coeffs;
  double coeff_sum = 0.0;
  for (const auto& [N, c] : A.coeffs()) {
    if (int_dot(N, gamma) != 0 || c.isZero(0.0)) continue;
    modes.push_back(N);
    coeffs.push_back(c.col(0));
    coeff_sum += c.norm();
  }

  ConditionBracket out;
  out.samples = sphere_samples;
  const double factor = (form == ConditionForm::kTransverse && !A.is_real_valued()) ? std::sqrt(2.0) : 1.0;
  out.hi = glen * coeff_sum * mu.transform_sup() * factor / kPi;
  out.best_et = orthogonal_complement(e).col(0);
  if (modes.empty()) return out;

  const int grid = grid_per_axis > 0 ? grid_per_axis : span_grid(modes, n);
  out.grid_per_axis = grid;
  const CMatrix P = phase_matrix(modes, grid, n);
  const ConditionEvaluator eval{L, mu, e, modes, coeffs, form};

  const auto dirs = sample_transverse(e, std::max(sphere_samples, 1));
  double best = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double v = eval(dirs[i], P);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  RVector best_dir = dirs[best_i];

  if (n == 3) {
    // Golden-section refinement on the circle around the best sample.
    const RMatrix comp = orthogonal_complement(e);
    const double phi0 = std::atan2(best_dir.dot(comp.col(1)), best_dir.dot(comp.col(0)));
    const double delta = kTwoPi / std::max(sphere_samples, 1);
    auto at = [&](double phi) { return RVector(std::cos(phi) * comp.col(0) + std::sin(phi) * comp.col(1)); };
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = phi0 - delta, b = phi0 + delta;
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double f1 = eval(at(x1), P), f2 = eval(at(x2), P);
    for (int it = 0; it < 40; ++it) {
      if (f1 > f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - ratio * (b - a);
        f1 = eval(at(x1), P);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + ratio * (b - a);
        f2 = eval(at(x2), P);
      }
    }
    const double phi = f1 > f2 ? x1 : x2;
    const double f = std::max(f1, f2);
    if (f > best) {
      best = f;
      best_dir = at(phi);
    }
  } else if (n > 3) {
    // Deterministic hill climb with shrinking tangent steps.
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    double step = 0.5;
    for (int it = 0; it < 200 && step > 1e-6; ++it) {
      RVector trial = best_dir;
      for (Eigen::Index j = 0; j < trial.size(); ++j) trial(j) += step * normal(rng);
      trial = project_transverse(trial, e);
      const double v = eval(trial, P);
      if (v > best) {
        best = v;
        best_dir = trial;
      } else {
        step *= 0.9;
      }
    }
  }

  // A refined grid contains the coarse one, so its maximum can only grow.
  const CMatrix fine = phase_matrix(modes, 4 * grid, n);
  best = std::max(best, eval(best_dir, fine));
  out.lo = glen * best / kPi;
  out.best_et = best_dir;
  return out;
}

double averaged_grid_max(const FourierField& A, const IntVec& gamma, const MeasureSpec& mu, const RVector& et,
                         ConditionForm form, int grid_per_axis) {
  const FourierField At = averaged_potential(A, gamma, mu, et);
  if (At.empty()) return 0.0;
  const RVector g = A.lattice().point(gamma);
  const RVector e = g / g.norm();
  const int grid = grid_per_axis > 0 ? grid_per_axis : default_grid(At);
  double best = 0.0;
  for (const CMatrix& v : evaluate_grid(At, grid)) {
    const CVector a = v.col(0);
    const double value = form == ConditionForm::kEuclidean
                             ? a.norm()
                             : std::abs(et.cast<cplx>().dot(a) + cplx{0, 1} * e.cast<cplx>().dot(a));
    best = std::max(best, value);
  }
  return best;
}

PotentialSet PotentialSet::zero(const Lattice& lattice, const CliffordRep& rep) {
  return {FourierField::vector(lattice), FourierField::matrix(lattice, rep.size()),
          FourierField::matrix(lattice, rep.size()), rep};
}

void PotentialSet::validate() const {
  if (A.kind() != FieldKind::kVector) throw std::invalid_argument("PotentialSet: A must be a vector field");
  if (V0.rows() != rep.size() || V1.rows() != rep.size())
    throw std::invalid_argument("PotentialSet: matrix potentials must match the representation size");
  for (const auto& [N, c] : V0.coeffs())
    if (classify_matrix(c, rep).value != MatrixClass::kCommuting)
      throw std::invalid_argument("PotentialSet: V0 coefficient at " + to_string(N) +
                                  " does not commute with every alpha_j");
  for (const auto& [N, c] : V1.coeffs()) {
    const auto cls = classify_matrix(c, rep);
    if (cls.value != MatrixClass::kAnticommuting && !cls.both)
      throw std::invalid_argument("PotentialSet: V1 coefficient at " + to_string(N) +
                                  " does not anticommute with every alpha_j");
  }
}

FourierField PotentialSet::composite() const {
  FourierField out = V0 + V1;
  for (const auto& [N, c] : A.coeffs()) out.add(N, -rep.contract(CVector(c.col(0))));
  return out;
}

PotentialSet PotentialSet::scaled(double t) const { return {A.scaled(t), V0.scaled(t), V1.scaled(t), rep}; }

double w_norm(const PotentialSet& pot) {
  return pot.A.lattice().dimension() * coefficient_sum(pot.A) + coefficient_sum(pot.V0) + coefficient_sum(pot.V1);
}

}  // namespace pdirac
