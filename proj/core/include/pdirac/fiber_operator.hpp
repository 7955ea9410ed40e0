#pragma once

#include <string>
#include <unordered_map>

#include "pdirac/clifford.hpp"
#include "pdirac/fields.hpp"
#include "pdirac/lattice.hpp"

namespace pdirac {

/// Complexified quasimomentum k + i kappa e.
struct FiberPoint {
  RVector k;
  RVector e;
  double kappa = 0.0;

  /// Throws std::invalid_argument unless |e| = 1 (1e-12) and kappa >= 0.
  void validate() const;
};

struct IntVecHash {
  std::size_t operator()(const IntVec& v) const noexcept;
};

/// Ordered, duplicate-free list of reciprocal modes used as the truncated
/// Fourier basis.
class ModeSet {
 public:
  ModeSet() = default;
  /// Throws on duplicates or mixed dimensions.
  explicit ModeSet(std::vector<IntVec> modes);

  /// {N : |2 pi N| <= cutoff}, sorted by (|N|, coords).
  static ModeSet within_cutoff(const Lattice& lattice, double cutoff);
  /// {N : |k + 2 pi N| <= cutoff}, sorted by (|k + 2 pi N|, coords).
  static ModeSet shifted(const Lattice& lattice, const RVector& k, double cutoff);

  const std::vector<IntVec>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  const IntVec& operator[](std::size_t i) const { return modes_[i]; }
  /// Position of N, or -1.
  long index_of(const IntVec& N) const;
  bool closed_under_negation() const;

 private:
  std::vector<IntVec> modes_;
  std::unordered_map<IntVec, long, IntVecHash> index_;
};

/// sum_j (k + 2 pi N + i kappa e)_j alpha_j.
CMatrix symbol(const CliffordRep& rep, const Lattice& lattice, const FiberPoint& fiber, const IntVec& N);

struct GFactors {
  double minus = 0.0;
  double plus = 0.0;
};

/// G^{+-} = sqrt((x, e)^2 + (kappa +- |x - (x, e) e|)^2) with x = k + 2 pi N.
GFactors g_factors(const Lattice& lattice, const FiberPoint& fiber, const IntVec& N);

/// Transverse unit direction of x relative to e, or nothing when x lies on
/// the axis (|x - (x, e) e| <= 1e-12 |x|).
std::optional<RVector> transverse_direction(const RVector& x, const RVector& e);

/// Block-diagonal projector whose N-th block is projector(e, et(k + 2 pi N))
/// and zero on the axis.
CMatrix global_projection(const CliffordRep& rep, const Lattice& lattice, const RVector& k, const RVector& e,
                          const ModeSet& modes, Sign sign);

/// The fiber restricted to a mode set, as a dense matrix with M x M blocks
/// D_N + V_0 on the diagonal and V_{N - N'} off it.
class TruncatedDiracOperator {
 public:
  const Lattice& lattice() const { return lattice_; }
  const CliffordRep& rep() const { return rep_; }
  const ModeSet& modes() const { return modes_; }
  const FiberPoint& fiber() const { return fiber_; }
  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// Block of rows for mode i and columns for mode j.
  CMatrix block(std::size_t i, std::size_t j) const;

 private:
  friend TruncatedDiracOperator assemble(const Lattice&, const CliffordRep&, const ModeSet&, const FiberPoint&,
                                         const PotentialSet&);
  Lattice lattice_;
  CliffordRep rep_;
  ModeSet modes_;
  FiberPoint fiber_;
  CMatrix matrix_;
  std::vector<std::string> warnings_;
};

/// Warns (does not throw) when the potential support radius exceeds twice
/// the mode cutoff, since the truncation then clips the convolution.
TruncatedDiracOperator assemble(const Lattice& lattice, const CliffordRep& rep, const ModeSet& modes,
                                const FiberPoint& fiber, const PotentialSet& pot);

/// Largest |H - H^dagger| entry relative to the largest |H| entry.
double hermitian_defect(const CMatrix& H);

/// Ascending eigenvalues with multiplicity. Throws std::invalid_argument
/// when the matrix is not Hermitian to 1e-12 relative (use sigma_min).
std::vector<double> eigenvalues(const TruncatedDiracOperator& op);
std::vector<double> hermitian_eigenvalues(const CMatrix& H);

inline constexpr Eigen::Index kDenseLimit = 4000;

/// Smallest singular value of a dense matrix: sqrt of the least eigenvalue
/// of H^dagger H, recomputed by a divide-and-conquer SVD when that
/// eigenvalue is below 1e-8 of the largest. Throws std::invalid_argument
/// above `dense_limit`.
double smallest_singular_value(const CMatrix& H, Eigen::Index dense_limit = kDenseLimit);

double sigma_min(const TruncatedDiracOperator& op, Eigen::Index dense_limit = kDenseLimit);

/// sqrt of min ||D phi||^2 / sum_N w_N^2 ||phi_N||^2, i.e. the smallest
/// singular value of D diag(w_N)^{-1}. Throws for nonpositive weights.
double weighted_sigma_min(const TruncatedDiracOperator& op, const std::vector<double>& weights,
                          Eigen::Index dense_limit = kDenseLimit);

/// Per-mode G^- on the operator's modes, in mode order.
std::vector<double> g_minus_weights(const TruncatedDiracOperator& op);

/// min_N G^-_N: the smallest singular value of the free fiber.
double free_sigma_min(const Lattice& lattice, const FiberPoint& fiber, const ModeSet& modes);

/// Cutoff whose window reaches 3 (kappa + W) past the first reciprocal
/// shell.
double default_cutoff(const Lattice& lattice, double kappa, double w);

}  // namespace pdirac
