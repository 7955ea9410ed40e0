#include <doctest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"

using namespace pdirac;

namespace {

ThomasParams small_params(const IntVec& gamma) {
  ThomasParams p;
  p.gamma = gamma;
  p.k_points = 2;
  p.cutoff = 3.0 * kPi;
  p.sphere_samples = 64;
  return p;
}

double free_closed_form(const Lattice& L, const RVector& k, const RVector& e, double kappa, double cutoff) {
  double best = std::numeric_limits<double>::infinity();
  const ModeSet modes = ModeSet::shifted(L, k, cutoff);
  for (const IntVec& N : modes.modes())
    best = std::min(best, oracle::free_stretch(k + kTwoPi * L.dual_point(N), e, kappa).first);
  return best;
}

}  // namespace

TEST_CASE("integer kernel basis spans the orthogonal integer vectors") {
  for (const IntVec& gamma : {IntVec{1, 0, 0}, IntVec{2, 3, 0}, IntVec{6, 10, 15}, IntVec{0, 0, -4}}) {
    const auto W = integer_kernel_basis(gamma);
    REQUIRE(W.size() == 2);
    for (const auto& w : W) CHECK(int_dot(w, gamma) == 0);
    const long long c0 = 1LL * W[0][1] * W[1][2] - 1LL * W[0][2] * W[1][1];
    const long long c1 = 1LL * W[0][2] * W[1][0] - 1LL * W[0][0] * W[1][2];
    const long long c2 = 1LL * W[0][0] * W[1][1] - 1LL * W[0][1] * W[1][0];
    // The cross product of a kernel basis is gamma / gcd(gamma) up to sign.
    long long g = 0;
    for (int c : gamma) g = std::gcd(g, static_cast<long long>(std::abs(c)));
    CHECK(std::llabs(c0) == std::llabs(gamma[0] / g));
    CHECK(std::llabs(c1) == std::llabs(gamma[1] / g));
    CHECK(std::llabs(c2) == std::llabs(gamma[2] / g));
  }
  CHECK_THROWS_AS(integer_kernel_basis({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("face grid and kappa grid") {
  const Lattice L = Lattice::cubic(3);
  const auto grid = face_k_grid(L, {1, 1, 0}, 5);
  CHECK(grid.size() == 25);
  for (const RVector& k : grid) CHECK(k.dot(L.point({1, 1, 0})) == doctest::Approx(kPi).epsilon(1e-14));
  const auto kap = kappa_grid(2.0, 3);
  REQUIRE(kap.size() == 3);
  CHECK(kap[0] == doctest::Approx(kPi / 2));
  CHECK(kap[2] == doctest::Approx(2 * kPi));
}

TEST_CASE("free scan: margins equal the closed form and the bound holds everywhere") {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  const ThomasParams p = small_params({1, 0, 0});
  const Theorem2Report r = verify_theorem2(L, rep, PotentialSet::zero(L, rep), p, 0.5);
  CHECK(r.c5 == 1.0);
  CHECK(r.bound == doctest::Approx(0.5 * kPi));
  CHECK(r.holds);
  REQUIRE(r.kappa_star);
  CHECK(*r.kappa_star == r.kappas.front());
  const RVector e = RVector::Unit(3, 0);
  for (const ThomasNode& n : r.nodes) {
    const double want = free_closed_form(L, n.k, e, n.kappa, r.cutoff);
    CHECK(std::abs(n.sigma_min - want) <= 1e-10 * want);
    CHECK(n.free_sigma_min == doctest::Approx(want).epsilon(1e-14));
    CHECK(n.margin == doctest::Approx(n.sigma_min - r.bound));
  }
}

TEST_CASE("scaled potential: margins move continuously and return to the free value at zero") {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  std::mt19937_64 rng(61);
  PotentialSet pot = PotentialSet::zero(L, rep);
  pot.A = oracle::random_vector_field(L, 2, 1, 0.01, rng);
  pot.V0 = oracle::random_commuting_field(L, rep, 1, 1, 0.05, rng);
  const ThomasParams p = small_params({1, 0, 0});
  const Theorem2Report zero = verify_theorem2(L, rep, pot.scaled(0.0), p, 0.5);
  const Theorem2Report free = verify_theorem2(L, rep, PotentialSet::zero(L, rep), p, 0.5);
  double previous = 0.0;
  for (double t : {1e-3, 1e-2, 1e-1}) {
    const Theorem2Report r = verify_theorem2(L, rep, pot.scaled(t), p, 0.5);
    double change = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
      change = std::max(change, std::abs(r.nodes[i].sigma_min - zero.nodes[i].sigma_min));
    CHECK(change <= t * w_norm(pot) * (1 + 1e-9));
    CHECK(change >= previous);
    previous = change;
  }
  for (std::size_t i = 0; i < zero.nodes.size(); ++i) CHECK(zero.nodes[i].margin == free.nodes[i].margin);
}

TEST_CASE("parameter checks") {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  ThomasParams p = small_params({1, 0, 0});
  const PotentialSet zero = PotentialSet::zero(L, rep);
  CHECK_THROWS_AS(verify_theorem2(L, rep, zero, p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_theorem2(L, rep, zero, p, 1.0), std::invalid_argument);
  PotentialSet big = zero;
  CMatrix v(3, 1);
  v << 0.0, 0.0, 2.0;
  big.A.set({0, 1, 0}, v);
  big.A.set({0, -1, 0}, v);
  CHECK_THROWS_AS(verify_theorem2(L, rep, big, p, 0.5), std::invalid_argument);
  p.kappas = {0.4};
  CHECK_THROWS_AS(verify_theorem8(L, rep, zero, p, 0.1, 0.5), std::invalid_argument);
}

TEST_CASE("weighted bounds on the free fiber") {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  ThomasParams p = small_params({1, 0, 0});
  p.kappas = {kPi, 2 * kPi};
  const PotentialSet zero = PotentialSet::zero(L, rep);
  const Theorem8Report t8 = verify_theorem8(L, rep, zero, p, 0.1, 0.5);
  CHECK(t8.holds);
  CHECK(t8.min_ratio >= 1.0 - 1e-12);
  const C9Report c9 = corollary_c9(L, rep, zero, p);
  CHECK(c9.holds);
  for (const C9Node& n : c9.nodes) CHECK(std::abs(n.sqrt_c9 - 1.0) < 1e-12);
}

TEST_CASE("weighted bound with a small constant potential obeys the perturbation bound") {
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  PotentialSet pot = PotentialSet::zero(L, rep);
  pot.V0.set({0, 0, 0}, CMatrix(0.2 * rep.identity()));
  ThomasParams p = small_params({1, 0, 0});
  p.kappas = {kPi, 2 * kPi};
  const C9Report c9 = corollary_c9(L, rep, pot, p);
  CHECK(c9.holds);
  for (const C9Node& n : c9.nodes) {
    CHECK(n.sqrt_c9 >= n.perturbation_bound);
    // max_N 1/G-_N <= |gamma| / pi on the face.
    CHECK(n.perturbation_bound >= 1.0 - 0.2 / kPi - 1e-12);
  }
}

TEST_CASE("refinement comparison") {
  Theorem2Report a, b;
  a.kappas = b.kappas = {1.0, 2.0};
  a.min_sigma_per_kappa = {1.0, 2.0};
  b.min_sigma_per_kappa = {1.05, 2.0};
  a.kappa_star = b.kappa_star = 1.0;
  const RefinementComparison c = compare_refinement(a, b);
  CHECK(c.max_relative_change == doctest::Approx(0.05));
  CHECK(c.stable);
  b.kappa_star = 2.0;
  CHECK_FALSE(compare_refinement(a, b).stable);
}

TEST_CASE("chain with a single coefficient matches the closed form") {
  const Lattice L = Lattice::cubic(3);
  FourierField A = FourierField::vector(L);
  CMatrix v(3, 1);
  v << cplx(0.3, 0.1), 0.0, cplx(0.0, -0.2);
  const IntVec N{0, 1, 1};
  A.set(N, v);
  const double q = 0.75, h = 0.25, h1 = 0.5;
  const Theorem3Report r = theorem3_pipeline(A, q, h, h1, {2.0, 3.0}, 32);
  CHECK(r.atoms == 1);
  CHECK(r.weighted_total == doctest::Approx(std::pow(std::sqrt(2.0), 2 * q) * v.squaredNorm()));
  const MeasureSpec mu = MeasureSpec::plateau(h, h1);
  for (const Theorem3Entry& e : r.entries) {
    const bool orth = int_dot(N, e.certificate.gamma) == 0;
    for (const ChainSample& s : e.samples) {
      const double along = L.dual_point(N).dot(s.et);
      const double f = orth ? e.certificate.length * mu.transform(kTwoPi * along) * v.norm() : 0.0;
      const bool in_slab = orth && std::abs(along) <= h1;
      CHECK(s.f_lo == doctest::Approx(f).epsilon(1e-12));
      CHECK(s.middle == doctest::Approx(in_slab ? e.certificate.length * v.norm() : 0.0).epsilon(1e-12));
      CHECK(s.outer == doctest::Approx(in_slab ? e.certificate.length * v.norm() : 0.0).epsilon(1e-12));
      CHECK(s.ordered);
    }
  }
  CHECK(r.chain_ok);
}

TEST_CASE("chain for the zero field") {
  const Lattice L = Lattice::cubic(3);
  const Theorem3Report r = theorem3_pipeline(FourierField::vector(L), 0.75, 0.25, 0.5, {2.0}, 16);
  CHECK(r.atoms == 0);
  for (const auto& e : r.entries)
    for (const auto& s : e.samples) {
      CHECK(s.f_lo == 0.0);
      CHECK(s.middle == 0.0);
      CHECK(s.outer == 0.0);
    }
  CHECK(r.chain_ok);
  CHECK_THROWS_AS(theorem3_pipeline(FourierField::vector(L), 0.5, 0.25, 0.5, {2.0}), std::invalid_argument);
}
