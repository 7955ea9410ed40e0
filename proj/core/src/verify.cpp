#include "pdirac/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace pdirac {

std::vector<IntVec> integer_kernel_basis(const IntVec& gamma) {
  if (is_zero(gamma)) throw std::invalid_argument("integer_kernel_basis: gamma must be nonzero");
  const std::size_t n = gamma.size();
  std::vector<long long> g(gamma.begin(), gamma.end());
  // Columns of a unimodular matrix U with g^T U kept equal to gamma^T U.
  std::vector<std::vector<long long>> U(n, std::vector<long long>(n, 0));
  for (std::size_t j = 0; j < n; ++j) U[j][j] = 1;
  while (true) {
    std::size_t pivot = n;
    int nonzero = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (g[j] == 0) continue;
      ++nonzero;
      if (pivot == n || std::llabs(g[j]) < std::llabs(g[pivot])) pivot = j;
    }
    if (nonzero <= 1) {
      std::vector<IntVec> out;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == pivot) continue;
        IntVec w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<int>(U[j][i]);
        out.push_back(std::move(w));
      }
      return out;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == pivot || g[j] == 0) continue;
      const long long q = g[j] / g[pivot];
      g[j] -= q * g[pivot];
      for (std::size_t i = 0; i < n; ++i) U[j][i] -= q * U[pivot][i];
    }
  }
}

std::vector<RVector> face_k_grid(const Lattice& lattice, const IntVec& gamma, int points_per_axis) {
  if (points_per_axis < 1) throw std::invalid_argument("face_k_grid: points_per_axis must be positive");
  const RVector g = lattice.point(gamma);
  const RVector base = kPi * g / g.squaredNorm();
  std::vector<RVector> dirs;
  for (const IntVec& w : integer_kernel_basis(gamma)) dirs.push_back(kTwoPi * lattice.dual_point(w));
  std::vector<RVector> out;
  IntVec idx(dirs.size(), 0);
  while (true) {
    RVector k = base;
    for (std::size_t j = 0; j < dirs.size(); ++j)
      k += (static_cast<double>(idx[j]) / points_per_axis) * dirs[j];
    out.push_back(std::move(k));
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == points_per_axis) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return out;
}

std::vector<double> kappa_grid(double gamma_length, int count) {
  std::vector<double> out;
  for (int j = 0; j < count; ++j) out.push_back(kPi / gamma_length * std::ldexp(1.0, j));
  return out;
}

namespace {

struct Setup {
  RVector e;
  double gamma_length = 0.0;
  std::vector<RVector> k_grid;
  std::vector<double> kappas;
  double cutoff = 0.0;
  double C = 0.0;
  std::vector<std::string> warnings;
};

/// Largest operator dimension the default cutoff may produce. A 1.25x
/// refinement roughly doubles it and the dense solve is cubic, so the cap
/// keeps a full default scan to about a minute on one core.
constexpr Eigen::Index kDefaultDimensionCap = 512;

Setup prepare(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot, const ThomasParams& p) {
  pot.validate();
  if (static_cast<int>(p.gamma.size()) != lattice.dimension() || is_zero(p.gamma))
    throw std::invalid_argument("gamma must be a nonzero lattice vector of matching dimension");
  Setup s;
  const RVector g = lattice.point(p.gamma);
  s.gamma_length = g.norm();
  s.e = g / s.gamma_length;
  s.k_grid = face_k_grid(lattice, p.gamma, p.k_points);
  s.kappas = p.kappas.empty() ? kappa_grid(s.gamma_length, 3) : p.kappas;
  std::sort(s.kappas.begin(), s.kappas.end());
  for (double kappa : s.kappas)
    if (!(kappa >= 0.0)) throw std::invalid_argument("kappa values must be nonnegative");
  if (p.cutoff > 0.0) {
    s.cutoff = p.cutoff;
  } else {
    s.cutoff = default_cutoff(lattice, s.kappas.back(), w_norm(pot));
    const double wanted = s.cutoff;
    auto dimension = [&](double cutoff) {
      Eigen::Index d = 0;
      for (const RVector& k : s.k_grid)
        d = std::max(d, static_cast<Eigen::Index>(ModeSet::shifted(lattice, k, cutoff).size()) * rep.size());
      return d;
    };
    while (dimension(s.cutoff) > kDefaultDimensionCap) s.cutoff *= 0.95;
    if (s.cutoff < wanted)
      s.warnings.push_back("default cutoff " + std::to_string(wanted) + " reduced to " + std::to_string(s.cutoff) +
                           " to keep the dense solve within " + std::to_string(kDefaultDimensionCap) + " rows");
  }
  s.C = p.C > 0.0 ? p.C : default_kernel_constant().C;
  return s;
}

ConditionBracket theta_bracket(const PotentialSet& pot, const ThomasParams& p) {
  ConditionBracket b = condition_value(pot.A, p.gamma, p.mu, p.sphere_samples, ConditionForm::kTransverse);
  if (!(b.hi < 1.0))
    throw std::invalid_argument("the condition bracket upper end " + std::to_string(b.hi) + " is not below 1");
  return b;
}

}  // namespace

Theorem2Report verify_theorem2(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot,
                               const ThomasParams& params, double theta) {
  const Setup s = prepare(lattice, rep, pot, params);
  Theorem2Report r;
  r.gamma = params.gamma;
  r.gamma_length = s.gamma_length;
  r.mu = params.mu;
  r.theta_tilde = theta_bracket(pot, params);
  if (!(theta > 0.0) || !(theta < 1.0 - r.theta_tilde.hi))
    throw std::invalid_argument("theta must lie in (0, 1 - hi(theta~))");
  r.theta = theta;
  r.C = s.C;
  r.c5 = c5(pot.A, s.gamma_length, params.mu.h(), params.mu, s.C);
  r.bound = theta * kPi / s.gamma_length * r.c5;
  r.cutoff = s.cutoff;
  r.k_grid = s.k_grid;
  r.kappas = s.kappas;
  r.warnings = s.warnings;

  const std::size_t nk = s.k_grid.size();
  r.nodes.resize(nk * s.kappas.size());
  std::vector<std::vector<std::string>> warnings(r.nodes.size());
  parallel_for(r.nodes.size(), params.threads, [&](std::size_t i) {
    ThomasNode& node = r.nodes[i];
    node.k_index = i % nk;
    node.k = s.k_grid[node.k_index];
    node.kappa = s.kappas[i / nk];
    const ModeSet modes = ModeSet::shifted(lattice, node.k, s.cutoff);
    const FiberPoint fiber{node.k, s.e, node.kappa};
    const auto op = assemble(lattice, rep, modes, fiber, pot);
    node.mode_count = modes.size();
    node.sigma_min = sigma_min(op);
    node.free_sigma_min = free_sigma_min(lattice, fiber, modes);
    node.bound = r.bound;
    node.margin = node.sigma_min - r.bound;
    warnings[i] = op.warnings();
  });
  std::set<std::string> seen(r.warnings.begin(), r.warnings.end());
  for (const auto& w : warnings)
    for (const auto& msg : w)
      if (seen.insert(msg).second) r.warnings.push_back(msg);

  r.min_sigma_per_kappa.assign(s.kappas.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    r.min_sigma_per_kappa[i / nk] = std::min(r.min_sigma_per_kappa[i / nk], r.nodes[i].sigma_min);
  for (std::size_t j = s.kappas.size(); j-- > 0;) {
    if (r.min_sigma_per_kappa[j] < r.bound) break;
    r.kappa_star = s.kappas[j];
  }
  r.holds = r.kappa_star.has_value();
  return r;
}

RefinementComparison compare_refinement(const Theorem2Report& base, const Theorem2Report& refined, double tolerance) {
  if (base.kappas != refined.kappas || base.k_grid.size() != refined.k_grid.size())
    throw std::invalid_argument("compare_refinement: scans use different grids");
  RefinementComparison c;
  c.kappa_star_base = base.kappa_star;
  c.kappa_star_refined = refined.kappa_star;
  for (std::size_t j = 0; j < base.kappas.size(); ++j) {
    const double a = base.min_sigma_per_kappa[j];
    const double b = refined.min_sigma_per_kappa[j];
    c.max_relative_change = std::max(c.max_relative_change, std::abs(b - a) / std::abs(a));
  }
  c.stable = base.kappa_star == refined.kappa_star && c.max_relative_change <= tolerance;
  return c;
}

Theorem8Report verify_theorem8(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot,
                               const ThomasParams& params, double delta, double beta) {
  const Setup s = prepare(lattice, rep, pot, params);
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  for (double kappa : s.kappas)
    if (!(kappa > beta)) throw std::invalid_argument("every kappa must exceed beta");
  Theorem8Report r;
  r.gamma = params.gamma;
  r.gamma_length = s.gamma_length;
  r.theta_tilde = theta_bracket(pot, params);
  r.C = s.C;
  r.c5 = c5(pot.A, s.gamma_length, params.mu.h(), params.mu, s.C);
  r.delta = delta;
  r.beta = beta;
  const double inner = r.c5 * (1.0 - r.theta_tilde.hi) * kPi / s.gamma_length;
  r.inner_weight = inner * inner;
  r.cutoff = s.cutoff;

  const std::size_t nk = s.k_grid.size();
  r.nodes.resize(nk * s.kappas.size());
  parallel_for(r.nodes.size(), params.threads, [&](std::size_t i) {
    WeightedNode& node = r.nodes[i];
    node.k_index = i % nk;
    node.k = s.k_grid[node.k_index];
    node.kappa = s.kappas[i / nk];
    const ModeSet modes = ModeSet::shifted(lattice, node.k, s.cutoff);
    const FiberPoint fiber{node.k, s.e, node.kappa};
    const auto op = assemble(lattice, rep, modes, fiber, pot);
    const auto annulus = k_beta_set(lattice, node.k, s.e, node.kappa, beta, modes.modes());
    std::vector<double> weights = g_minus_weights(op);
    for (const IntVec& N : annulus) weights[static_cast<std::size_t>(modes.index_of(N))] = inner;
    const double w = weighted_sigma_min(op, weights);
    node.mode_count = modes.size();
    node.k_beta_count = annulus.size();
    node.ratio = w * w;
    node.ok = node.ratio >= 1.0 - delta;
  });
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& node : r.nodes) r.min_ratio = std::min(r.min_ratio, node.ratio);
  r.delta_star = 1.0 - r.min_ratio;
  r.holds = r.min_ratio >= 1.0 - delta;
  return r;
}

C9Report corollary_c9(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot,
                      const ThomasParams& params) {
  const Setup s = prepare(lattice, rep, pot, params);
  C9Report r;
  r.w = coefficient_sum(pot.composite());
  r.cutoff = s.cutoff;
  const std::size_t nk = s.k_grid.size();
  r.nodes.resize(nk * s.kappas.size());
  parallel_for(r.nodes.size(), params.threads, [&](std::size_t i) {
    C9Node& node = r.nodes[i];
    node.k_index = i % nk;
    node.k = s.k_grid[node.k_index];
    node.kappa = s.kappas[i / nk];
    const ModeSet modes = ModeSet::shifted(lattice, node.k, s.cutoff);
    const auto op = assemble(lattice, rep, modes, FiberPoint{node.k, s.e, node.kappa}, pot);
    const auto weights = g_minus_weights(op);
    double inv = 0.0;
    for (double w : weights) inv = std::max(inv, 1.0 / w);
    node.mode_count = modes.size();
    node.sqrt_c9 = weighted_sigma_min(op, weights);
    node.perturbation_bound = 1.0 - r.w * inv;
    // Slack covers the rounding of the dense singular-value computation.
    node.ok = node.sqrt_c9 >= node.perturbation_bound - 1e-10;
  });
  r.min_sqrt_c9 = std::numeric_limits<double>::infinity();
  r.holds = true;
  for (const auto& node : r.nodes) {
    r.min_sqrt_c9 = std::min(r.min_sqrt_c9, node.sqrt_c9);
    r.holds = r.holds && node.ok;
  }
  return r;
}

Theorem3Report theorem3_pipeline(const FourierField& A, double q, double h, double h1,
                                 const std::vector<double>& R0_list, int sphere_samples, int threads) {
  const Lattice& L = A.lattice();
  const int n = L.dimension();
  if (A.kind() != FieldKind::kVector) throw std::invalid_argument("theorem3_pipeline: A must be a vector field");
  if (!(2.0 * q > n - 2)) throw std::invalid_argument("theorem3_pipeline: requires 2q > n - 2");
  if (A.mean().norm() > 1e-12) throw std::invalid_argument("theorem3_pipeline: A must have zero mean");
  const MeasureSpec plateau = MeasureSpec::plateau(h, h1);

  Theorem3Report r;
  r.q = q;
  r.h = h;
  r.h1 = h1;

  struct Mode {
    IntVec N;
    RVector cart;
    double length;
    double amp;  // ||A_N||
  };
  std::vector<Mode> modes;
  std::vector<SphereMeasure::Atom> atoms;
  for (const auto& [N, c] : A.coeffs()) {
    if (is_zero(N) || c.isZero(0.0)) continue;
    const RVector cart = L.dual_point(N);
    const double len = cart.norm();
    const double amp = c.norm();
    modes.push_back({N, cart, len, amp});
    const double w = std::pow(len, 2.0 * q) * amp * amp;
    atoms.push_back({cart / len, w});
    r.weighted_total += w;
  }
  const SphereMeasure mu1(atoms);
  r.atoms = mu1.atoms().size();

  r.chain_ok = true;
  for (double R0 : R0_list) {
    Theorem3Entry entry;
    entry.R0 = R0;
    entry.slab_h = std::pow(R0, -1.0 / (n - 1));
    entry.certificate = find_gamma(L, mu1, entry.slab_h, R0, 0.0, threads);
    const IntVec& gamma = entry.certificate.gamma;
    const double glen = entry.certificate.length;
    const RVector e = entry.certificate.gamma_cart / glen;

    std::vector<const Mode*> orth;
    for (const Mode& m : modes) {
      if (int_dot(m.N, gamma) != 0) continue;
      orth.push_back(&m);
      entry.orthogonal_weight += std::pow(m.length, 2.0 * q) * m.amp * m.amp;
    }
    entry.orthogonal_modes = orth.size();

    const ConditionBracket b = condition_value(A, gamma, plateau, sphere_samples, ConditionForm::kEuclidean);
    entry.f = {b.lo * kPi, b.hi * kPi};

    std::vector<RVector> dirs = sample_transverse(e, sphere_samples);
    dirs.push_back(b.best_et);
    entry.samples.resize(dirs.size());
    parallel_for(dirs.size(), threads, [&](std::size_t i) {
      ChainSample& cs = entry.samples[i];
      cs.et = dirs[i];
      cs.f_lo = glen * averaged_grid_max(A, gamma, plateau, cs.et, ConditionForm::kEuclidean);
      double amp_sum = 0.0, inv_sum = 0.0;
      for (const Mode* m : orth) {
        if (std::abs(m->cart.dot(cs.et)) > h1) continue;
        amp_sum += m->amp;
        inv_sum += std::pow(m->length, -2.0 * q);
      }
      cs.middle = glen * amp_sum;
      cs.outer = glen * std::sqrt(inv_sum) * std::sqrt(entry.orthogonal_weight);
      // Relative slack of a few ulps for the floating-point sums.
      constexpr double slack = 1e-12;
      cs.ordered = cs.f_lo <= cs.middle * (1.0 + slack) + slack && cs.middle <= cs.outer * (1.0 + slack) + slack;
    });
    entry.chain_ok = true;
    for (const auto& cs : entry.samples) {
      entry.f_lo_max = std::max(entry.f_lo_max, cs.f_lo);
      entry.middle_max = std::max(entry.middle_max, cs.middle);
      entry.outer_max = std::max(entry.outer_max, cs.outer);
      entry.chain_ok = entry.chain_ok && cs.ordered;
    }
    r.chain_ok = r.chain_ok && entry.chain_ok;
    r.entries.push_back(std::move(entry));
  }
  r.outer_decreasing = !r.entries.empty();
  for (std::size_t i = 1; i < r.entries.size(); ++i)
    if (!(r.entries[i].outer_max < r.entries[i - 1].outer_max)) r.outer_decreasing = false;
  return r;
}

double random_probe_min(const CMatrix& H, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double best = std::numeric_limits<double>::infinity();
  constexpr int kBatch = 64;
  for (int done = 0; done < trials; done += kBatch) {
    const int count = std::min(kBatch, trials - done);
    CMatrix phi(H.cols(), count);
    for (Eigen::Index j = 0; j < count; ++j)
      for (Eigen::Index i = 0; i < H.cols(); ++i) phi(i, j) = cplx{normal(rng), normal(rng)};
    phi.colwise().normalize();
    const CMatrix image = H * phi;
    best = std::min(best, image.colwise().norm().minCoeff());
  }
  return best;
}

}  // namespace pdirac
