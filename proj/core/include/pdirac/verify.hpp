#pragma once

#include <cstdint>
#include <optional>

#include "pdirac/fiber_operator.hpp"
#include "pdirac/gauge.hpp"

namespace pdirac {

/// Basis of the integer vectors orthogonal (integer dot product) to a
/// nonzero gamma, from a unimodular column reduction. Returns n - 1 vectors.
std::vector<IntVec> integer_kernel_basis(const IntVec& gamma);

/// Quasimomenta on the face (k, gamma) = pi:
///   k = pi gamma / |gamma|^2 + 2 pi sum_j s_j W_j,  s_j in {0, 1/p, ..., (p-1)/p}
/// where W_j are the reciprocal vectors of integer_kernel_basis(gamma).
/// First kernel coordinate varies fastest.
std::vector<RVector> face_k_grid(const Lattice& lattice, const IntVec& gamma, int points_per_axis);

/// kappa_j = (pi / |gamma|) 2^j, j = 0..count-1.
std::vector<double> kappa_grid(double gamma_length, int count);

/// Common parameters of the Thomas-type harnesses.
struct ThomasParams {
  IntVec gamma;
  MeasureSpec mu = MeasureSpec::dirac();
  int k_points = 5;
  std::vector<double> kappas;  // empty selects kappa_grid(|gamma|, 3)
  /// <= 0 selects default_cutoff at the largest kappa, shrunk when needed so
  /// the operator dimension stays within 512 (with a warning).
  double cutoff = 0.0;
  double C = 0.0;              // <= 0 selects default_kernel_constant()
  int sphere_samples = 1024;
  int threads = 1;
};

struct ThomasNode {
  std::size_t k_index = 0;
  RVector k;
  double kappa = 0.0;
  std::size_t mode_count = 0;
  double sigma_min = 0.0;
  double free_sigma_min = 0.0;  // min_N G^-_N on the same window
  double bound = 0.0;
  double margin = 0.0;  // sigma_min - bound
};

struct Theorem2Report {
  IntVec gamma;
  double gamma_length = 0.0;
  MeasureSpec mu;
  ConditionBracket theta_tilde;
  double theta = 0.0;
  double C = 0.0;
  double c5 = 1.0;
  double bound = 0.0;  // theta pi / |gamma| c5
  double cutoff = 0.0;
  std::vector<RVector> k_grid;
  std::vector<double> kappas;
  std::vector<ThomasNode> nodes;  // kappa-major, then k index
  std::vector<double> min_sigma_per_kappa;
  /// Smallest scanned kappa from which sigma_min >= bound at every node.
  std::optional<double> kappa_star;
  bool holds = false;
  std::vector<std::string> warnings;
};

/// Scans sigma_min of the truncated fiber over the face k-grid and the kappa
/// grid. Throws std::invalid_argument when hi(theta~) >= 1, theta is not in
/// (0, 1 - hi(theta~)), or A has nonzero mean.
Theorem2Report verify_theorem2(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot,
                               const ThomasParams& params, double theta);

struct RefinementComparison {
  std::optional<double> kappa_star_base;
  std::optional<double> kappa_star_refined;
  /// max over kappa of |min sigma refined - min sigma base| / min sigma base
  double max_relative_change = 0.0;
  bool stable = false;
};

/// Stability of two scans that differ only in cutoff: kappa* identical and
/// per-kappa minima within `tolerance` relative.
RefinementComparison compare_refinement(const Theorem2Report& base, const Theorem2Report& refined,
                                        double tolerance = 0.1);

struct WeightedNode {
  std::size_t k_index = 0;
  RVector k;
  double kappa = 0.0;
  std::size_t mode_count = 0;
  std::size_t k_beta_count = 0;
  /// min ||D phi||^2 / (weighted norm)^2 on the truncated space.
  double ratio = 0.0;
  bool ok = false;
};

struct Theorem8Report {
  IntVec gamma;
  double gamma_length = 0.0;
  ConditionBracket theta_tilde;
  double C = 0.0;
  double c5 = 1.0;
  double delta = 0.0;
  double beta = 0.0;
  /// Squared weight used on the slab-annulus modes:
  /// c5^2 (1 - hi(theta~))^2 (pi / |gamma|)^2.
  double inner_weight = 0.0;
  double cutoff = 0.0;
  std::vector<WeightedNode> nodes;
  double min_ratio = 0.0;
  double delta_star = 0.0;  // 1 - min_ratio
  bool holds = false;
};

/// Requires every kappa > beta > 0 and hi(theta~) < 1.
Theorem8Report verify_theorem8(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot,
                               const ThomasParams& params, double delta, double beta);

struct C9Node {
  std::size_t k_index = 0;
  RVector k;
  double kappa = 0.0;
  std::size_t mode_count = 0;
  double sqrt_c9 = 0.0;
  /// 1 - W max_N 1/G^-_N with W the coefficient sum of the potential.
  double perturbation_bound = 0.0;
  bool ok = false;
};

struct C9Report {
  double w = 0.0;
  double cutoff = 0.0;
  std::vector<C9Node> nodes;
  double min_sqrt_c9 = 0.0;
  bool holds = false;
};

/// Weighted sigma_min with weights G^-_N at every node, checked against the
/// first-order perturbation bound.
C9Report corollary_c9(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot,
                      const ThomasParams& params);

struct ChainSample {
  RVector et;
  double f_lo = 0.0;    // |gamma| grid max |A~(et)|
  double middle = 0.0;  // |gamma| sum over Pi(gamma, et) of ||A_N||
  double outer = 0.0;   // Cauchy-Schwarz product
  bool ordered = false;
};

struct Theorem3Entry {
  double R0 = 0.0;
  double slab_h = 0.0;
  GammaCertificate certificate;
  /// |gamma| sup |A~| bracket, maximized over et.
  NormBracket f;
  std::size_t orthogonal_modes = 0;  // support modes in Pi(gamma)
  double orthogonal_weight = 0.0;    // sum over Pi(gamma) of |N|^{2q} ||A_N||^2
  double f_lo_max = 0.0;
  double middle_max = 0.0;
  double outer_max = 0.0;
  std::vector<ChainSample> samples;
  bool chain_ok = false;
};

struct Theorem3Report {
  double q = 0.0;
  double h = 0.0;
  double h1 = 0.0;
  std::size_t atoms = 0;
  double weighted_total = 0.0;  // sum |N|^{2q} ||A_N||^2
  std::vector<Theorem3Entry> entries;
  bool chain_ok = false;
  bool outer_decreasing = false;
};

/// Builds the atomic sphere measure sum |N|^{2q} ||A_N||^2 delta_{N/|N|},
/// selects gamma for every R0 with slab width R0^{-1/(n-1)}, and evaluates
/// the three members of the chain at `sphere_samples` directions plus the
/// maximizing one. Throws unless 2q > n - 2 and A has zero mean.
Theorem3Report theorem3_pipeline(const FourierField& A, double q, double h, double h1,
                                 const std::vector<double>& R0_list, int sphere_samples = 256, int threads = 1);

/// min ||H phi|| over `trials` random unit vectors (complex Gaussian,
/// seeded). Always >= the smallest singular value.
double random_probe_min(const CMatrix& H, int trials, std::uint64_t seed);

}  // namespace pdirac
