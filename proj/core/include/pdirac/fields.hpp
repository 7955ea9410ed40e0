#pragma once

#include <map>
#include <optional>

#include "pdirac/clifford.hpp"
#include "pdirac/lattice.hpp"
#include "pdirac/measure.hpp"
#include "pdirac/types.hpp"

namespace pdirac {

enum class FieldKind { kScalar, kVector, kMatrix };

/// Periodic trigonometric polynomial sum_N c_N e^{2 pi i (N, x)} over a
/// finite set of reciprocal-lattice modes N (integer coordinates in E_j^*).
/// Coefficients are stored as matrices: 1x1 (scalar), n x 1 (vector) or
/// M x M (matrix). Modes are kept in lexicographic order.
class FourierField {
 public:
  FourierField() = default;
  FourierField(Lattice lattice, FieldKind kind, int width);

  static FourierField scalar(const Lattice& lattice) { return {lattice, FieldKind::kScalar, 1}; }
  static FourierField vector(const Lattice& lattice) { return {lattice, FieldKind::kVector, lattice.dimension()}; }
  static FourierField matrix(const Lattice& lattice, int M) { return {lattice, FieldKind::kMatrix, M}; }

  const Lattice& lattice() const { return lattice_; }
  FieldKind kind() const { return kind_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  /// Sets (replaces) the coefficient at N; shape must match the kind.
  void set(const IntVec& N, CMatrix value);
  /// Adds to the coefficient at N.
  void add(const IntVec& N, const CMatrix& value);
  void set(const IntVec& N, cplx value) { set(N, CMatrix::Constant(1, 1, value)); }

  /// Coefficient at N, zero when N is outside the support.
  CMatrix coeff(const IntVec& N) const;
  const std::map<IntVec, CMatrix>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  /// Drops coefficients whose entries are all exactly zero.
  void prune();

  /// max |2 pi N| over the support (0 for an empty field).
  double support_radius() const;
  /// coeff(-N) = conj(coeff(N)) entrywise.
  bool is_real_valued(double tol = 1e-12) const;
  /// coeff(-N) = coeff(N)^dagger.
  bool is_hermitian_valued(double tol = 1e-12) const;

  /// sum_N c_N e^{2 pi i (N, x)}.
  CMatrix evaluate(const RVector& x) const;
  /// The zero mode A_0 (cell average).
  CMatrix mean() const { return coeff(IntVec(static_cast<std::size_t>(lattice_.dimension()), 0)); }

  FourierField scaled(cplx s) const;
  FourierField operator+(const FourierField& other) const;
  FourierField operator-(const FourierField& other) const;

  /// Vector field component j as a scalar field.
  FourierField component(int j) const;

 private:
  void check_shape(const CMatrix& value) const;

  Lattice lattice_;
  FieldKind kind_ = FieldKind::kScalar;
  Eigen::Index rows_ = 1;
  Eigen::Index cols_ = 1;
  std::map<IntVec, CMatrix> coeffs_;
};

/// Pointwise norm of a coefficient-shaped value: modulus, Euclidean norm of
/// a complex vector, or operator 2-norm of a matrix.
double pointwise_norm(const CMatrix& value, FieldKind kind);

/// Smallest grid size per axis that resolves every dual coordinate of the
/// support: 2 * (max_j (max n_j - min n_j)) + 1, at least 4.
int default_grid(const FourierField& field);

/// Values of the field on the uniform grid x = sum_j (i_j / g) E_j.
/// Returned in odometer order (first coordinate fastest).
std::vector<CMatrix> evaluate_grid(const FourierField& field, int grid_per_axis);

/// lo = grid maximum of the pointwise norm, hi = sum_N ||c_N||.
/// grid_per_axis <= 0 selects default_grid(field).
NormBracket sup_norm(const FourierField& field, int grid_per_axis = 0);

/// Coefficient-sum upper bound sum_N ||c_N|| alone.
double coefficient_sum(const FourierField& field);

/// Averaged potential: the coefficient at N becomes mu^(2 pi (N, et)) c_N
/// when (N, gamma) = 0 and vanishes otherwise. Requires |et| = 1 and
/// (et, gamma) = 0 to 1e-10 relative to |gamma|.
FourierField averaged_potential(const FourierField& A, const IntVec& gamma, const MeasureSpec& mu,
                                const RVector& et);

/// Which pointwise quantity the condition checker maximizes.
enum class ConditionForm {
  /// |(A~, et) + i (A~, e)|, the transverse complex combination.
  kTransverse,
  /// |A~| (Euclidean), the form of the plain averaged-potential condition.
  kEuclidean,
};

struct ConditionBracket {
  /// theta~ bounds: max over et of |gamma| sup|.| / pi.
  double lo = 0.0;
  double hi = 0.0;
  RVector best_et;
  int samples = 0;
  int grid_per_axis = 0;
};

/// Orthonormal basis (columns) of the complement of the unit vector e,
/// completed from the standard axes.
RMatrix orthogonal_complement(const RVector& e);

/// Directions et in S_{n-2}(e) sampled for the sphere maximization: for
/// n = 3 a uniform circle of `samples` points, otherwise a deterministic
/// quasi-random (Halton + Box-Muller) sample of the same size.
std::vector<RVector> sample_transverse(const RVector& e, int samples);

/// Grid maximum, for the single direction et, of the pointwise quantity
/// selected by `form` for the averaged potential (no |gamma|/pi factor).
/// grid_per_axis <= 0 selects the default grid of the averaged field.
double averaged_grid_max(const FourierField& A, const IntVec& gamma, const MeasureSpec& mu, const RVector& et,
                         ConditionForm form, int grid_per_axis = 0);

/// Brackets theta~ for a zero-mean field A. Throws std::invalid_argument
/// for nonzero mean.
ConditionBracket condition_value(const FourierField& A, const IntVec& gamma, const MeasureSpec& mu,
                                 int sphere_samples = 4096, ConditionForm form = ConditionForm::kTransverse,
                                 int grid_per_axis = 0);

/// Real-valued vector field A with matrix fields V0 (commuting class) and V1
/// (anticommuting class).
struct PotentialSet {
  FourierField A;
  FourierField V0;
  FourierField V1;
  CliffordRep rep;

  static PotentialSet zero(const Lattice& lattice, const CliffordRep& rep);

  /// Throws std::invalid_argument when a V0 coefficient is not in the
  /// commuting class or a V1 coefficient not in the anticommuting class.
  void validate() const;
  /// V0 + V1 - sum_j A_j alpha_j.
  FourierField composite() const;
  PotentialSet scaled(double t) const;
};

/// n hi(A) + hi(V0) + hi(V1).
double w_norm(const PotentialSet& pot);

}  // namespace pdirac
