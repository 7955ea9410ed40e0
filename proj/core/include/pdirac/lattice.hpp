#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "pdirac/types.hpp"

namespace pdirac {

/// Columns of the inverse transpose of `basis` (columns E_j). Throws
/// std::invalid_argument when the basis is singular.
RMatrix reciprocal_basis(const RMatrix& basis);

/// Period lattice with basis vectors stored as columns, together with its
/// reciprocal lattice, (E_j, E_l^*) = delta_jl.
class Lattice {
 public:
  Lattice() = default;
  /// `basis` holds E_1..E_n as columns.
  explicit Lattice(RMatrix basis);

  static Lattice cubic(int n);

  int dimension() const { return static_cast<int>(basis_.cols()); }
  const RMatrix& basis() const { return basis_; }
  const RMatrix& reciprocal() const { return reciprocal_; }
  double cell_volume() const { return cell_volume_; }
  double dual_cell_volume() const { return 1.0 / cell_volume_; }

  RVector point(const IntVec& m) const;       // sum m_j E_j
  RVector dual_point(const IntVec& n) const;  // sum n_j E_j^*

  double shortest_length() const { return shortest_; }
  double shortest_dual_length() const { return shortest_dual_; }

 private:
  RMatrix basis_;
  RMatrix reciprocal_;
  double cell_volume_ = 0.0;
  double shortest_ = 0.0;
  double shortest_dual_ = 0.0;
};

struct LatticePoint {
  IntVec coords;
  RVector cart;  // basis * coords
  double norm = 0.0;
};

/// All integer m with |shift + basis*m| <= radius, including m = 0, sorted
/// by (|shift + basis*m|, lexicographic coords). `norm` is |shift + cart|.
std::vector<LatticePoint> enumerate_shifted(const RMatrix& basis, const RVector& shift, double radius);

/// Nonzero lattice vectors with |gamma| <= radius, sorted by (|gamma|, coords).
std::vector<LatticePoint> enumerate_points(const RMatrix& basis, double radius);

/// Modes N in `window` with k + 2 pi N in the slab-annulus
///   |(x,e)| < beta  and  |kappa - |x - (x,e)e|| < beta.
/// Throws std::invalid_argument unless kappa > beta > 0.
std::vector<IntVec> k_beta_set(const Lattice& lattice, const RVector& k, const RVector& e, double kappa,
                               double beta, const std::vector<IntVec>& window);

/// Same set with the window {N : |2 pi N| <= cutoff}.
std::vector<IntVec> k_beta_set(const Lattice& lattice, const RVector& k, const RVector& e, double kappa,
                               double beta, double cutoff);

/// The complete (window-free) set; the annulus is bounded so it is finite.
std::vector<IntVec> k_beta_set(const Lattice& lattice, const RVector& k, const RVector& e, double kappa,
                               double beta);

/// Atomic nonnegative measure on the unit sphere. Atoms are kept in a
/// canonical order so sums do not depend on input order.
class SphereMeasure {
 public:
  struct Atom {
    RVector direction;
    double weight = 0.0;
  };

  SphereMeasure() = default;
  explicit SphereMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  double total() const { return total_; }
  /// mu({e' : |(e', v)| <= h}).
  double slab(const RVector& v, double h) const;

 private:
  std::vector<Atom> atoms_;
  double total_ = 0.0;
};

struct GammaCertificate {
  IntVec gamma;
  RVector gamma_cart;
  double length = 0.0;
  double R0 = 0.0;
  double h = 0.0;
  double slab_weight = 0.0;
  double total_weight = 0.0;
  /// mu(slab)/mu(S) divided by |gamma|^{-1} max{h, R0^{-1/(n-1)}}; the
  /// smallest admissible c2.
  double slab_ratio = 0.0;
  /// min |gamma'| over orthogonal dual vectors in the window, divided by
  /// R0^{1/(n-1)}; +inf when none was found. Any c1 below it is admissible.
  double min_orth = std::numeric_limits<double>::infinity();
  double min_orth_length = std::numeric_limits<double>::infinity();
  std::optional<IntVec> min_orth_vector;
  double orth_window = 0.0;
};

struct GammaCheck {
  bool passed = false;
  bool length_ok = false;      // |gamma| <= R0
  bool orthogonal_ok = false;  // orthogonal dual vectors longer than c1 R0^{1/(n-1)}
  bool slab_ok = false;        // slab bound with c2
  GammaCertificate certificate;
};

/// Evaluates the three selection conditions literally. The orthogonal dual
/// vectors are searched within radius max(2 c1 R0^{1/(n-1)}, 10 * shortest
/// dual length). Throws for gamma = 0 or h <= 0.
GammaCheck check_gamma(const Lattice& lattice, const IntVec& gamma, const SphereMeasure& mu, double h, double R0,
                       double c1, double c2);

/// Lexicographic objective used by find_gamma: smaller slab_ratio, then
/// larger min_orth, then smaller |gamma|, then smaller coordinates.
bool better_candidate(const GammaCertificate& a, const GammaCertificate& b);

/// Best gamma with |gamma| <= R0 under better_candidate. The orthogonal
/// search uses radius `search_window` (<= 0 selects 10 * shortest dual
/// length). Throws std::invalid_argument when R0 is below the shortest
/// lattice vector.
GammaCertificate find_gamma(const Lattice& lattice, const SphereMeasure& mu, double h, double R0,
                            double search_window = 0.0, int threads = 1);

/// Certificate for one candidate with a precomputed dual window (sorted by
/// length); shared by the checker and the searcher.
GammaCertificate evaluate_gamma(const Lattice& lattice, const LatticePoint& gamma, const SphereMeasure& mu, double h,
                                double R0, const std::vector<LatticePoint>& dual_window, double window_radius);

}  // namespace pdirac
