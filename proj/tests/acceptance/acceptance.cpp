// Acceptance runner: one line per criterion, nonzero exit when any fails.
//
//   pdirac_acceptance [--only N] [--update-golden]

#include <sys/wait.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "oracles.hpp"

using namespace pdirac;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects failures; the first few messages go into the report line.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << " (" << checks_ << " checks";
    if (failures_) s << ", " << failures_ << " failed: " << messages_;
    s << ")";
    return {failures_ == 0, s.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string messages_;
};

std::string fmt(double x) { return format_number(x); }

std::string data(const std::string& name) { return std::string(PDIRAC_TEST_DATA_DIR) + "/" + name; }

RVector orthogonal_unit(const RVector& g, std::mt19937_64& rng) {
  const RVector e = g.normalized();
  const RVector v = oracle::random_unit(static_cast<int>(g.size()), rng);
  return (v - v.dot(e) * e).normalized();
}

Outcome clifford_suite() {
  Tally t;
  std::mt19937_64 rng(1001);
  for (int n = 3; n <= 6; ++n) {
    const CliffordRep rep = build_clifford(n);
    const int M = rep.size();
    const CMatrix I = rep.identity();
    int pairs = 0;
    for (int j = 0; j <= n; ++j)
      for (int l = j; l <= n; ++l) {
        const CMatrix& a = rep.all()[static_cast<std::size_t>(j)];
        const CMatrix& b = rep.all()[static_cast<std::size_t>(l)];
        t.expect((a * b + b * a - (j == l ? 2.0 : 0.0) * I).norm() == 0.0,
                 "anticommutator n=" + std::to_string(n) + " (" + std::to_string(j) + "," + std::to_string(l) + ")");
        ++pairs;
      }
    t.expect(pairs == (n + 1) * (n + 2) / 2, "pair count");
    for (int trial = 0; trial < 20; ++trial) {
      const RVector e = oracle::random_unit(n, rng);
      const RVector et = orthogonal_unit(e, rng);
      const double along = std::normal_distribution<double>()(rng);
      const double perp = std::abs(std::normal_distribution<double>()(rng)) + 0.1;
      const double kappa = 3.0 * std::uniform_real_distribution<double>()(rng);
      // Symbol of one mode whose transverse part points along et.
      const RVector x = along * e + perp * et;
      CMatrix D = CMatrix::Zero(M, M);
      for (int j = 0; j < n; ++j) D += cplx(x(j), kappa * e(j)) * rep.alpha(j);
      for (Sign s : {Sign::kPlus, Sign::kMinus}) {
        const CMatrix P = projector(e, et, s, rep);
        t.expect((P * P - P).norm() < 1e-12, "idempotence");
        t.expect((P - P.adjoint()).norm() < 1e-12, "hermiticity");
        const Eigen::SelfAdjointEigenSolver<CMatrix> eig(P);
        int rank = 0;
        for (Eigen::Index i = 0; i < M; ++i) rank += eig.eigenvalues()(i) > 0.5 ? 1 : 0;
        t.expect(rank == M / 2, "rank");
        t.expect((P * D * P).norm() < 1e-12 * D.norm(), "P D P = 0");
      }
    }
  }
  return t.outcome("n = 3..6, 20 projector pairs each");
}

Outcome symbol_spectra() {
  Tally t;
  const Lattice L = Lattice::cubic(3);
  const CliffordRep rep = build_clifford(3);
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_int_distribution<int> coord(-3, 3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    FiberPoint f;
    f.k = RVector(3);
    for (int j = 0; j < 3; ++j) f.k(j) = u(rng);
    f.e = oracle::random_unit(3, rng);
    f.kappa = 2.0 * std::abs(u(rng));
    const IntVec N{coord(rng), coord(rng), coord(rng)};
    const RVector s = Eigen::JacobiSVD<CMatrix>(symbol(rep, L, f, N)).singularValues();
    const auto [gm, gp] = oracle::free_stretch(f.k + kTwoPi * L.dual_point(N), f.e, f.kappa);
    for (int i = 0; i < 4; ++i) {
      const double want = i < 2 ? gp : gm;
      const double err = std::abs(s(i) - want) / gp;
      worst = std::max(worst, err);
      t.expect(err <= 1e-10, "singular value " + std::to_string(i) + " of trial " + std::to_string(trial));
    }
  }
  for (const IntVec& gamma : {IntVec{1, 0, 0}, IntVec{1, 1, 0}, IntVec{1, 1, 1}, IntVec{2, -1, 0}}) {
    const RVector g = L.point(gamma);
    const double floor = kPi / g.norm();
    for (const RVector& k : face_k_grid(L, gamma, 5)) {
      const ModeSet modes = ModeSet::shifted(L, k, 6 * kPi);
      for (double kappa : {0.0, 2.0, 12.0}) {
        const FiberPoint f{k, g.normalized(), kappa};
        for (const IntVec& N : modes.modes()) {
          // (k + 2 pi N, gamma) = pi (1 + 2 (N, gamma)): an odd multiple of pi.
          t.expect((1 + 2 * int_dot(N, gamma)) % 2 != 0, "odd factor");
          t.expect(g_factors(L, f, N).minus >= floor * (1.0 - 1e-15), "face floor");
        }
      }
    }
  }
  return t.outcome("100 random fibers, worst relative error " + fmt(worst));
}

Outcome averaged_potential_suite() {
  Tally t;
  const Lattice L = Lattice::cubic(3);
  std::mt19937_64 rng(1003);
  const double h = 0.25, h1 = 0.5;
  const oracle::PlateauDensity density = oracle::plateau_density(h, h1, 0.05, 100.0);
  const std::vector<IntVec> gammas{{1, 0, 0}, {1, 1, 0}, {0, 1, -1}, {1, -1, 2}, {2, 1, 0}};
  double worst_dirac = 0.0, worst_plateau = 0.0;
  for (int p = 0; p < 50; ++p) {
    const IntVec& gamma = gammas[static_cast<std::size_t>(p) % gammas.size()];
    const FourierField A = oracle::random_vector_field(L, 6, 2, 0.5, rng);
    const RVector et = orthogonal_unit(L.point(gamma), rng);
    const RVector x = 3.0 * oracle::random_unit(3, rng);
    const FourierField dirac = averaged_potential(A, gamma, MeasureSpec::dirac(), et);
    const FourierField plateau = averaged_potential(A, gamma, MeasureSpec::plateau(h, h1), et);
    for (const FourierField* At : {&dirac, &plateau})
      for (const auto& [N, c] : A.coeffs())
        if (int_dot(N, gamma) != 0) t.expect(At->coeff(N).isZero(0.0), "mode with (N, gamma) != 0 survived");
    const double ed = (oracle::evaluate_vector(dirac, x) - oracle::averaged_by_quadrature(A, L, gamma, et, x, nullptr)).norm();
    const double ep =
        (oracle::evaluate_vector(plateau, x) - oracle::averaged_by_quadrature(A, L, gamma, et, x, &density)).norm();
    worst_dirac = std::max(worst_dirac, ed);
    worst_plateau = std::max(worst_plateau, ep);
    t.expect(ed < 1e-12, "dirac point " + std::to_string(p));
    t.expect(ep < 1e-6, "plateau point " + std::to_string(p));
  }
  return t.outcome("50 points, worst dirac " + fmt(worst_dirac) + ", plateau " + fmt(worst_plateau));
}

struct RandomCase {
  IntVec gamma;
  RVector et;
};

RandomCase random_case(const Lattice& L, std::mt19937_64& rng) {
  static const std::vector<IntVec> gammas{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, -1, 1}, {0, 2, 1}, {2, 1, 1}};
  RandomCase c;
  c.gamma = gammas[std::uniform_int_distribution<std::size_t>(0, gammas.size() - 1)(rng)];
  c.et = orthogonal_unit(L.point(c.gamma), rng);
  return c;
}

Outcome gauge_identities() {
  Tally t;
  const Lattice L = Lattice::cubic(3);
  const double C = default_kernel_constant().C;
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const RandomCase c = random_case(L, rng);
    const MeasureSpec mu = trial % 2 ? MeasureSpec::plateau(0.2, 0.45) : MeasureSpec::dirac();
    const FourierField A = oracle::random_vector_field(L, 6, 2, 0.4, rng);
    const FourierField At = averaged_potential(A, c.gamma, mu, c.et);
    const Frame frame = build_frame(L, c.gamma, c.et);
    const GaugePolynomials phi = build_phi(A, At, frame);
    const FourierField diff = A - At;
    double scale = 0.0;
    for (const auto& [N, v] : diff.coeffs()) scale = std::max(scale, v.norm());
    for (const auto& [N, v] : diff.coeffs()) {
      const RVector x = L.dual_point(N);
      const cplx d1(0, kTwoPi * x.dot(c.et)), d2(0, kTwoPi * x.dot(frame.e));
      const cplx a = c.et.cast<cplx>().dot(v.col(0));
      const cplx b = frame.e.cast<cplx>().dot(v.col(0));
      const cplx p1 = phi.phi1.coeff(N)(0, 0), p2 = phi.phi2.coeff(N)(0, 0);
      const double e1 = std::abs(d1 * p1 - d2 * p2 - a) / scale;
      const double e2 = std::abs(d2 * p1 + d1 * p2 - b) / scale;
      worst = std::max({worst, e1, e2});
      t.expect(e1 <= 1e-12 && e2 <= 1e-12, "identity at trial " + std::to_string(trial));
    }
    t.expect(lemma1_check(A, At, frame, mu, mu.h(), C).multiplier_ok, "multiplier at trial " + std::to_string(trial));
  }
  return t.outcome("100 random fields, worst relative residual " + fmt(worst));
}

Outcome lemma1_suite() {
  Tally t;
  const KernelConstant& k = default_kernel_constant();
  t.expect(k.cross_residual <= 1e-4, "quadrature routes disagree: " + fmt(k.cross_residual));
  const Lattice L = Lattice::cubic(3);
  std::mt19937_64 rng(1005);
  int failures = 0, runs = 0;
  double tightest = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const RandomCase c = random_case(L, rng);
    const FourierField A = oracle::random_vector_field(L, 5, 2, 0.3, rng);
    const Frame frame = build_frame(L, c.gamma, c.et);
    for (const MeasureSpec& mu : {MeasureSpec::dirac(), MeasureSpec::plateau(0.2, 0.45)}) {
      const FourierField At = averaged_potential(A, c.gamma, mu, c.et);
      const Lemma1Report r = lemma1_check(A, At, frame, mu, mu.h(), k.C);
      ++runs;
      if (!r.passed) ++failures;
      if (r.bound > 0.0) tightest = std::max(tightest, std::max(r.phi1.lo, r.phi2.lo) / r.bound);
      t.expect(r.passed, "trial " + std::to_string(trial) + " (" + to_json(mu).dump() + ")");
    }
  }
  return t.outcome("C = " + fmt(k.C) + ", route residual " + fmt(k.cross_residual) + ", " + std::to_string(runs) +
                   " runs, " + std::to_string(failures) + " failures, max sup/bound " + fmt(tightest));
}

int coord_pick(std::mt19937_64& rng) { return std::uniform_int_distribution<int>(-2, 2)(rng); }

Outcome gamma_search() {
  Tally t;
  const Lattice L = Lattice::cubic(3);
  std::mt19937_64 rng(1006);
  std::uniform_int_distribution<int> count(1, 10);
  std::uniform_int_distribution<int> weight(1, 8);
  int cases = 0;
  for (int R0 = 2; R0 <= 6; ++R0) {
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<SphereMeasure::Atom> atoms;
      std::vector<std::pair<RVector, double>> plain;
      const int m = count(rng);
      for (int i = 0; i < m; ++i) {
        // Half the cases use lattice directions, where slabs have exact edges.
        RVector d = oracle::random_unit(3, rng);
        if (trial % 2 == 1) {
          const IntVec v{coord_pick(rng), coord_pick(rng), coord_pick(rng)};
          if (!is_zero(v)) d = L.point(v).normalized();
        }
        const double w = 0.25 * weight(rng);
        atoms.push_back({d, w});
        plain.emplace_back(d, w);
      }
      const SphereMeasure mu(atoms);
      const double h = trial < 2 ? 0.2 : 0.05;
      const GammaCertificate got = find_gamma(L, mu, h, R0);
      const oracle::GammaChoice want = oracle::exhaustive_gamma(plain, h, R0, 10.0);
      const std::string tag = "R0=" + std::to_string(R0) + " trial " + std::to_string(trial);
      t.expect(got.gamma == want.gamma, tag + " winner differs");
      t.expect(got.slab_ratio == want.slab_ratio, tag + " slab ratio differs");
      const double c1 = std::isfinite(got.min_orth) ? got.min_orth * (1.0 - 1e-9) : 1.0;
      const GammaCheck check = check_gamma(L, got.gamma, mu, h, R0, c1, got.slab_ratio);
      t.expect(check.passed, tag + " certificate does not re-validate");
      ++cases;
    }
  }
  return t.outcome(std::to_string(cases) + " measures, R0 = 2..6");
}

Outcome free_bands_suite() {
  Tally t;
  const CliffordRep rep = build_clifford(3);
  double worst = 0.0;
  auto compare = [&](const BandSheet& sheet, const Lattice& L, double mass) {
    const ModeSet modes = ModeSet::within_cutoff(L, sheet.cutoff);
    t.expect(sheet.xi.size() == 20, "sweep length");
    for (std::size_t i = 0; i < sheet.xi.size(); ++i) {
      const RVector k = sheet.k0 + sheet.xi[i] * sheet.e;
      const auto want = oracle::free_bands(L, modes.modes(), k, rep.size(), mass);
      if (want.size() != sheet.energies[i].size()) {
        t.expect(false, "band count");
        continue;
      }
      for (std::size_t b = 0; b < want.size(); ++b) {
        const double err = std::abs(sheet.energies[i][b] - want[b]) / std::max(1.0, std::abs(want[b]));
        worst = std::max(worst, err);
        t.expect(err <= 1e-10, "band " + std::to_string(b) + " at xi " + fmt(sheet.xi[i]));
      }
    }
  };
  const Lattice Z3 = Lattice::cubic(3);
  const RVector k0 = (RVector(3) << 0.1, 0.2, -0.3).finished();
  const RVector e = (RVector(3) << 1.0, 1.0, 0.0).finished().normalized();
  compare(band_sweep(Z3, rep, PotentialSet::zero(Z3, rep), k0, e, 0.0, 2.0, 20, 2.5 * kTwoPi), Z3, 0.0);
  const Lattice skew(RMatrix((RMatrix(3, 3) << 1.0, 0.3, 0.0, 0.0, 1.2, 0.0, 0.2, 0.0, 0.8).finished()));
  for (double m : {0.7, -1.3}) {
    PotentialSet pot = PotentialSet::zero(skew, rep);
    pot.V1.set({0, 0, 0}, CMatrix(m * rep.extra()));
    compare(band_sweep(skew, rep, pot, RVector::Zero(3), RVector::Unit(3, 1), -1.0, 1.0, 20, 2.0 * kTwoPi), skew, m);
  }
  return t.outcome("free and two masses, worst relative error " + fmt(worst));
}

Outcome thomas_suite() {
  Tally t;
  const cli::RunConfig cfg = cli::load_config(data("thomas_example.json"));
  const Lattice& L = cfg.lattice;
  const PotentialSet& pot = cfg.potential;
  // The example's preconditions.
  const IntVec gamma = *cfg.gamma;
  t.expect(L.point(gamma).norm() == L.shortest_length(), "gamma is not a shortest lattice vector");
  t.expect(pot.A.coeff({0, 0, 0}).isZero(0.0), "A has nonzero mean");
  t.expect(w_norm(pot) <= 1.0, "W = " + fmt(w_norm(pot)));
  const double theta = cfg.thomas.theta;
  t.expect(theta == 0.5, "theta");

  ThomasParams p;
  p.gamma = gamma;
  p.k_points = cfg.thomas.k_points;
  p.cutoff = *cfg.thomas.cutoff;
  p.sphere_samples = cfg.thomas.sphere_samples;
  t.expect(p.k_points == 5, "k grid is not 5 x 5");
  const Theorem2Report base = verify_theorem2(L, cfg.rep, pot, p, theta);
  t.expect(base.theta_tilde.hi <= 0.3, "theta~ hi = " + fmt(base.theta_tilde.hi));
  t.expect(base.k_grid.size() == 25, "k grid size");
  t.expect(base.kappa_star.has_value(), "no kappa* on the grid");
  t.expect(base.holds, "bound fails");
  ThomasParams refined = p;
  refined.cutoff = p.cutoff * 1.25;
  const Theorem2Report fine = verify_theorem2(L, cfg.rep, pot, refined, theta);
  const RefinementComparison cmp = compare_refinement(base, fine, 0.1);
  t.expect(cmp.stable, "refinement changes the minima by " + fmt(cmp.max_relative_change));
  double min_margin = std::numeric_limits<double>::infinity();
  for (const ThomasNode& n : base.nodes)
    if (base.kappa_star && n.kappa >= *base.kappa_star) min_margin = std::min(min_margin, n.margin);

  // Zero potential: margins equal the closed-form free value.
  const Theorem2Report free = verify_theorem2(L, cfg.rep, PotentialSet::zero(L, cfg.rep), p, theta);
  double worst = 0.0;
  const RVector e = L.point(gamma).normalized();
  for (const ThomasNode& n : free.nodes) {
    double want = std::numeric_limits<double>::infinity();
    const ModeSet modes = ModeSet::shifted(L, n.k, free.cutoff);
    for (const IntVec& N : modes.modes())
      want = std::min(want, oracle::free_stretch(n.k + kTwoPi * L.dual_point(N), e, n.kappa).first);
    const double err = std::abs(n.margin - (want - free.bound)) / want;
    worst = std::max(worst, err);
    t.expect(err <= 1e-10, "free margin at kappa " + fmt(n.kappa));
  }
  return t.outcome("kappa* = " + (base.kappa_star ? fmt(*base.kappa_star) : std::string("none")) + ", bound " +
                   fmt(base.bound) + ", min margin " + fmt(min_margin) + ", refinement change " +
                   fmt(cmp.max_relative_change) + ", free error " + fmt(worst));
}

Outcome weighted_suite() {
  Tally t;
  const cli::RunConfig cfg = cli::load_config(data("thomas_example.json"));
  ThomasParams p;
  p.gamma = *cfg.gamma;
  p.k_points = cfg.weighted.k_points;
  p.cutoff = *cfg.weighted.cutoff;
  p.sphere_samples = cfg.weighted.sphere_samples;
  const C9Report free = corollary_c9(cfg.lattice, cfg.rep, PotentialSet::zero(cfg.lattice, cfg.rep), p);
  double worst = 0.0;
  for (const C9Node& n : free.nodes) {
    worst = std::max(worst, std::abs(n.sqrt_c9 - 1.0));
    t.expect(std::abs(n.sqrt_c9 - 1.0) <= 1e-12, "free sqrt(c9) = " + fmt(n.sqrt_c9));
  }
  const C9Report c9 = corollary_c9(cfg.lattice, cfg.rep, cfg.potential, p);
  double slack = std::numeric_limits<double>::infinity();
  for (const C9Node& n : c9.nodes) {
    slack = std::min(slack, n.sqrt_c9 - n.perturbation_bound);
    t.expect(n.sqrt_c9 >= n.perturbation_bound, "perturbation bound at kappa " + fmt(n.kappa));
  }
  t.expect(c9.holds, "report does not hold");
  return t.outcome(std::to_string(free.nodes.size()) + " nodes, free deviation " + fmt(worst) + ", W = " + fmt(c9.w) +
                   ", min sqrt(c9) " + fmt(c9.min_sqrt_c9) + ", min slack " + fmt(slack));
}

Outcome chain_suite() {
  Tally t;
  const FourierField A = oracle::decaying_random_field(Lattice::cubic(3), 7);
  const Theorem3Report r = theorem3_pipeline(A, 0.75, 0.25, 0.5, {2.0, 4.0, 8.0});
  std::string outer;
  for (const Theorem3Entry& e : r.entries) {
    for (const ChainSample& s : e.samples) {
      t.expect(s.f_lo <= s.middle && s.middle <= s.outer, "chain out of order at R0 " + fmt(e.R0));
      t.expect(s.ordered, "sample flag");
    }
    outer += (outer.empty() ? "" : " > ") + fmt(e.outer_max);
  }
  t.expect(r.entries.size() == 3, "entry count");
  for (std::size_t i = 1; i < r.entries.size(); ++i)
    t.expect(r.entries[i].outer_max < r.entries[i - 1].outer_max, "outer bound does not decrease");
  t.expect(r.chain_ok && r.outer_decreasing, "report flags");
  return t.outcome("outer " + outer);
}

struct GoldenCase {
  std::string config;
  std::string command;
  int exit_code;
};

const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases{
      {"free_bands.json", "bands", cli::kPass},
      {"single_mode.json", "check-condition", cli::kPass},
      {"single_mode_large.json", "check-condition", cli::kCheckFailed},
      {"find_gamma.json", "find-gamma", cli::kPass},
      {"thomas_small.json", "verify-thomas", cli::kPass},
      {"thomas_small.json", "verify-weighted", cli::kPass},
      {"lemma1.json", "lemma1", cli::kPass},
      {"kernel.json", "kernel-constant", cli::kPass},
  };
  return cases;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism_suite(bool update) {
  Tally t;
  namespace fs = std::filesystem;
  const fs::path scratch = fs::temp_directory_path() / "pdirac_acceptance_golden";
  fs::remove_all(scratch);
  int artifacts = 0;
  for (const GoldenCase& g : golden_cases()) {
    const std::string stem = fs::path(g.config).stem().string();
    const std::string tag = g.command + " on " + g.config;
    const fs::path golden = fs::path(PDIRAC_GOLDEN_DIR) / stem / g.command;
    const cli::RunConfig cfg = cli::load_config(data(g.config));
    cli::Options opts;
    opts.config = data(g.config);
    const cli::CommandResult a = cli::run_command(g.command, cfg, opts);
    const cli::CommandResult b = cli::run_command(g.command, cfg, opts);
    t.expect(a.exit_code == g.exit_code, tag + " exit code " + std::to_string(a.exit_code));
    t.expect(a.artifacts.size() == b.artifacts.size(), tag + " artifact count");

    // The binary, run separately, must write the same bytes.
    const fs::path out = scratch / stem / g.command;
    const std::string cmd = std::string(PDIRAC_BIN) + " " + g.command + " --config " + data(g.config) + " --out " +
                            out.string() + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    t.expect(WIFEXITED(status) && WEXITSTATUS(status) == g.exit_code, tag + " binary exit status");

    if (update) {
      fs::remove_all(golden);
      cli::write_artifacts(a, golden.string());
    }
    for (std::size_t i = 0; i < a.artifacts.size() && i < b.artifacts.size(); ++i) {
      const cli::Artifact& art = a.artifacts[i];
      ++artifacts;
      t.expect(art.bytes == b.artifacts[i].bytes, tag + " " + art.name + " differs between runs");
      t.expect(slurp(out / art.name) == art.bytes, tag + " " + art.name + " differs from the binary");
      t.expect(fs::exists(golden / art.name) && slurp(golden / art.name) == art.bytes,
               tag + " " + art.name + " differs from the golden file");
    }
  }
  fs::remove_all(scratch);
  return t.outcome(std::to_string(golden_cases().size()) + " commands, " + std::to_string(artifacts) + " artifacts" +
                   (update ? ", goldens rewritten" : ""));
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  bool update = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--update-golden") {
      update = true;
    } else {
      std::cerr << "usage: pdirac_acceptance [--only N] [--update-golden]\n";
      return 1;
    }
  }
  const std::vector<Criterion> criteria{
      {"Clifford relations and projectors", clifford_suite},
      {"symbol spectra", symbol_spectra},
      {"averaged potential", averaged_potential_suite},
      {"gauge identities", gauge_identities},
      {"gauge polynomial sup bound", lemma1_suite},
      {"gamma search", gamma_search},
      {"free bands", free_bands_suite},
      {"Thomas harness", thomas_suite},
      {"weighted bounds", weighted_suite},
      {"averaged-potential chain", chain_suite},
      {"determinism", [update] { return determinism_suite(update); }},
  };
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "pdirac_acceptance: no criterion " << only << "\n";
    return 1;
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& ex) {
      o = {false, std::string("threw: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].title << ": " << o.detail << " ["
              << std::fixed << std::setprecision(1) << secs << "s]" << std::defaultfloat << std::endl;
    if (!o.pass) ++failed;
  }
  return failed ? cli::kCheckFailed : 0;
}
