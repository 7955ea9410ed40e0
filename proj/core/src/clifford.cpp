#include "pdirac/clifford.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pdirac {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix pauli(char which) {
  CMatrix p(2, 2);
  const cplx i1{0.0, 1.0};
  switch (which) {
    case 'x': p << 0.0, 1.0, 1.0, 0.0; break;
    case 'y': p << 0.0, -i1, i1, 0.0; break;
    case 'z': p << 1.0, 0.0, 0.0, -1.0; break;
    default: p = CMatrix::Identity(2, 2); break;
  }
  return p;
}

}  // namespace

CMatrix CliffordRep::contract(const RVector& c) const {
  if (c.size() != n_) throw std::invalid_argument("contract: vector length does not match dimension");
  CMatrix out = CMatrix::Zero(size_, size_);
  for (int j = 0; j < n_; ++j)
    if (c(j) != 0.0) out += c(j) * alphas_[static_cast<std::size_t>(j)];
  return out;
}

CMatrix CliffordRep::contract(const CVector& c) const {
  if (c.size() != n_) throw std::invalid_argument("contract: vector length does not match dimension");
  CMatrix out = CMatrix::Zero(size_, size_);
  for (int j = 0; j < n_; ++j)
    if (c(j) != cplx{}) out += c(j) * alphas_[static_cast<std::size_t>(j)];
  return out;
}

CliffordRep build_clifford(int n) {
  if (n < 2) throw std::invalid_argument("build_clifford: dimension must be >= 2, got " + std::to_string(n));
  const int factors = (n + 2) / 2;  // ceil((n+1)/2)
  CliffordRep rep;
  rep.n_ = n;
  rep.size_ = 1 << factors;
  for (int q = 0; q < factors && static_cast<int>(rep.alphas_.size()) < n + 1; ++q) {
    for (char slot : {'x', 'y'}) {
      if (static_cast<int>(rep.alphas_.size()) == n + 1) break;
      CMatrix m = CMatrix::Identity(1, 1);
      for (int f = 0; f < factors; ++f) {
        const char c = f < q ? 'z' : (f == q ? slot : 'i');
        m = kron(m, pauli(c));
      }
      rep.alphas_.push_back(std::move(m));
    }
  }
  return rep;
}

Classification classify_matrix(const CMatrix& L, const CliffordRep& rep, double tol) {
  if (L.rows() != rep.size() || L.cols() != rep.size())
    throw std::invalid_argument("classify_matrix: matrix size does not match representation");
  bool commutes = true;
  bool anticommutes = true;
  for (int j = 0; j < rep.dimension(); ++j) {
    const CMatrix& a = rep.alpha(j);
    const CMatrix la = L * a;
    const CMatrix al = a * L;
    if ((la - al).cwiseAbs().maxCoeff() > tol) commutes = false;
    if ((la + al).cwiseAbs().maxCoeff() > tol) anticommutes = false;
  }
  Classification out;
  out.both = commutes && anticommutes;
  if (commutes)
    out.value = MatrixClass::kCommuting;
  else if (anticommutes)
    out.value = MatrixClass::kAnticommuting;
  else
    out.value = MatrixClass::kNeither;
  return out;
}

CMatrix projector(const RVector& e, const RVector& et, Sign sign, const CliffordRep& rep) {
  constexpr double tol = 1e-12;
  if (std::abs(e.norm() - 1.0) > tol || std::abs(et.norm() - 1.0) > tol || std::abs(e.dot(et)) > tol)
    throw std::invalid_argument("projector: e and et must be orthonormal");
  const cplx i1{0.0, 1.0};
  const CMatrix j = i1 * rep.contract(e) * rep.contract(et);
  const CMatrix id = rep.identity();
  return sign == Sign::kPlus ? CMatrix(0.5 * (id - j)) : CMatrix(0.5 * (id + j));
}

}  // namespace pdirac
