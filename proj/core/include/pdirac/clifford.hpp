#pragma once

#include <vector>

#include "pdirac/types.hpp"

namespace pdirac {

/// Entrywise tolerance used when deciding commutation classes.
inline constexpr double kClassTolerance = 1e-12;

/// Hermitian matrices alpha_1..alpha_n together with one more matrix
/// alpha_{n+1}, all pairwise anticommuting involutions of size M.
///
/// Layout (Jordan-Wigner): with m = ceil((n+1)/2) two-level factors,
///   alpha_{2q+1} = Z^{(x)q} (x) X (x) I^{(x)(m-q-1)}
///   alpha_{2q+2} = Z^{(x)q} (x) Y (x) I^{(x)(m-q-1)}
/// and the first n+1 of these are kept. Entries lie in {0, +-1, +-i}.
class CliffordRep {
 public:
  int dimension() const { return n_; }
  int size() const { return size_; }

  /// alpha_{j+1}, j in [0, n).
  const CMatrix& alpha(int j) const { return alphas_.at(static_cast<std::size_t>(j)); }
  /// The extra matrix alpha_{n+1} anticommuting with every alpha_j.
  const CMatrix& extra() const { return alphas_.back(); }
  /// All n+1 matrices, extra() last.
  const std::vector<CMatrix>& all() const { return alphas_; }

  /// sum_j c_j alpha_j over the n spatial matrices.
  CMatrix contract(const RVector& c) const;
  CMatrix contract(const CVector& c) const;

  CMatrix identity() const { return CMatrix::Identity(size_, size_); }

 private:
  friend CliffordRep build_clifford(int n);
  int n_ = 0;
  int size_ = 0;
  std::vector<CMatrix> alphas_;
};

/// Deterministic representation for dimension n (n >= 2).
/// Throws std::invalid_argument for n < 2.
CliffordRep build_clifford(int n);

enum class MatrixClass { kCommuting, kAnticommuting, kNeither };

struct Classification {
  MatrixClass value = MatrixClass::kNeither;
  /// Set when L both commutes and anticommutes with every alpha_j (L = 0).
  bool both = false;
};

/// L alpha_j = (-1)^s alpha_j L for all j <= n. The zero matrix reports
/// kCommuting with `both` set.
Classification classify_matrix(const CMatrix& L, const CliffordRep& rep,
                               double tol = kClassTolerance);

/// (1/2)(I -+ i (e.alpha)(et.alpha)); kPlus takes the minus sign.
/// Requires |e| = |et| = 1 and (e, et) = 0 to 1e-12.
CMatrix projector(const RVector& e, const RVector& et, Sign sign, const CliffordRep& rep);

}  // namespace pdirac
