#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace pdirac::cli {

namespace {

const char* status_word(int code) { return code == kPass ? "pass" : "fail"; }

Json envelope(const std::string& command, const RunConfig& cfg, int code) {
  Json j;
  j["command"] = command;
  j["status"] = status_word(code);
  j["config"] = emit_config(cfg);
  return j;
}

Artifact json_artifact(const std::string& name, const Json& j) { return {name, dump_json(j)}; }

IntVec gamma_or_default(const RunConfig& cfg) {
  if (cfg.gamma) return *cfg.gamma;
  IntVec g(static_cast<std::size_t>(cfg.dimension), 0);
  g[0] = 1;
  return g;
}

FourierField without_mean(const FourierField& A) {
  FourierField out = A;
  const IntVec zero(static_cast<std::size_t>(A.lattice().dimension()), 0);
  if (A.coeffs().count(zero)) {
    out.set(zero, CMatrix::Zero(A.rows(), A.cols()));
    out.prune();
  }
  return out;
}

ThomasParams base_params(const RunConfig& cfg, const Options& opts, int k_points, const std::vector<double>& kappas,
                         std::optional<double> cutoff, int sphere_samples) {
  ThomasParams p;
  p.gamma = gamma_or_default(cfg);
  p.mu = cfg.measure;
  p.k_points = k_points;
  p.kappas = kappas;
  p.cutoff = cutoff.value_or(0.0);
  p.sphere_samples = sphere_samples;
  p.threads = opts.threads;
  return p;
}

CommandResult cmd_bands(const RunConfig& cfg, const Options&) {
  const auto& s = cfg.bands;
  const int n = cfg.dimension;
  const RVector k0 = s.k0.value_or(RVector::Zero(n));
  const RVector dir = s.direction.value_or(RVector::Unit(n, 0));
  const double cutoff = s.cutoff.value_or(default_cutoff(cfg.lattice, 0.0, w_norm(cfg.potential)));

  const BandSheet sheet =
      band_sweep(cfg.lattice, cfg.rep, cfg.potential, k0, dir, s.xi_lo, s.xi_hi, s.samples, cutoff, 1);
  const EnergyWindow window = s.window.value_or(default_energy_window(sheet));
  const NonconstancyReport nc = nonconstancy_report(sheet, window, s.threshold);

  const int code = nc.suspect_count == 0 ? kPass : kCheckFailed;
  Json j = envelope("bands", cfg, code);
  Json r;
  r["k0"] = vector_json(sheet.k0);
  r["direction"] = vector_json(sheet.e);
  r["cutoff"] = number_json(sheet.cutoff);
  r["modes"] = sheet.mode_count;
  r["bands"] = sheet.band_count();
  r["samples"] = sheet.xi.size();
  r["nonconstancy"] = to_json(nc);
  r["warnings"] = sheet.warnings;
  j["result"] = r;

  std::ostringstream csv;
  write_band_csv(csv, sheet);
  CommandResult out;
  out.exit_code = code;
  out.artifacts = {{"bands.csv", csv.str()}, json_artifact("bands.json", j)};
  out.summary = "bands: " + std::to_string(sheet.band_count()) + " bands, " + std::to_string(nc.suspect_count) +
                " suspected flat";
  return out;
}

CommandResult cmd_check_condition(const RunConfig& cfg, const Options&) {
  const IntVec gamma = gamma_or_default(cfg);
  const double len = cfg.lattice.point(gamma).norm();
  const FourierField A = without_mean(cfg.potential.A);
  const auto& s = cfg.condition;
  const ConditionBracket b = condition_value(A, gamma, cfg.measure, s.sphere_samples, s.form, s.grid);

  // Strict inequality against 1; an undecided bracket cannot be reported as
  // a pass.
  std::string verdict = "undecided";
  if (b.hi < 1.0)
    verdict = "pass";
  else if (b.lo >= 1.0)
    verdict = "fail";
  const int code = verdict == "pass" ? kPass : kCheckFailed;

  Json j = envelope("check-condition", cfg, code);
  Json r;
  r["gamma"] = intvec_json(gamma);
  r["gamma_length"] = number_json(len);
  r["form"] = s.form == ConditionForm::kEuclidean ? "euclidean" : "transverse";
  r["removed_mean"] = !cfg.potential.A.mean().isZero(0.0);
  r["theta_tilde"] = to_json(b);
  r["sup_lo"] = number_json(b.lo * kPi / len);
  r["sup_hi"] = number_json(b.hi * kPi / len);
  r["threshold"] = number_json(kPi / len);
  r["verdict"] = verdict;
  j["result"] = r;

  CommandResult out;
  out.exit_code = code;
  out.artifacts = {json_artifact("condition.json", j)};
  out.summary = "check-condition: theta~ in [" + format_number(b.lo) + ", " + format_number(b.hi) + "], " + verdict;
  return out;
}

CommandResult cmd_find_gamma(const RunConfig& cfg, const Options& opts) {
  const auto& s = cfg.find_gamma;
  std::vector<SphereMeasure::Atom> atoms;
  for (const auto& a : s.atoms) atoms.push_back({a.direction, a.weight});
  const SphereMeasure mu(atoms);
  const GammaCertificate cert = find_gamma(cfg.lattice, mu, s.h, s.R0, s.search_window, opts.threads);

  int code = kPass;
  Json r;
  r["certificate"] = to_json(cert);
  if (s.c1 && s.c2) {
    const GammaCheck check = check_gamma(cfg.lattice, cert.gamma, mu, s.h, s.R0, *s.c1, *s.c2);
    r["check"] = {{"c1", number_json(*s.c1)},
                  {"c2", number_json(*s.c2)},
                  {"length_ok", check.length_ok},
                  {"orthogonal_ok", check.orthogonal_ok},
                  {"slab_ok", check.slab_ok},
                  {"passed", check.passed}};
    if (!check.passed) code = kCheckFailed;
  }

  CommandResult out;
  std::optional<Json> chain;
  if (cfg.theorem3) {
    const auto& t = *cfg.theorem3;
    const Theorem3Report rep = theorem3_pipeline(without_mean(cfg.potential.A), t.q, t.h, t.h1, t.R0,
                                                 t.sphere_samples, opts.threads);
    if (!rep.chain_ok || !rep.outer_decreasing) code = kCheckFailed;
    chain = to_json(rep);
  }

  Json j = envelope("find-gamma", cfg, code);
  j["result"] = r;
  out.artifacts.push_back(json_artifact("find_gamma.json", j));
  if (chain) {
    Json c = envelope("find-gamma", cfg, code);
    c["result"] = *chain;
    out.artifacts.push_back(json_artifact("theorem3.json", c));
  }
  out.exit_code = code;
  out.summary = "find-gamma: gamma = " + to_string(cert.gamma) + ", |gamma| = " + format_number(cert.length);
  return out;
}

/// Smallest sigma_min node for each kappa, re-assembled and probed with
/// random unit vectors.
Json probe_minima(const RunConfig& cfg, const Theorem2Report& rep, int trials, bool& ok) {
  ok = true;
  Json probes = Json::array();
  if (trials <= 0) return probes;
  const RVector e = cfg.lattice.point(rep.gamma).normalized();
  for (double kappa : rep.kappas) {
    const ThomasNode* worst = nullptr;
    for (const auto& node : rep.nodes)
      if (node.kappa == kappa && (!worst || node.sigma_min < worst->sigma_min)) worst = &node;
    if (!worst) continue;
    const FiberPoint fiber{worst->k, e, kappa};
    const ModeSet modes = ModeSet::shifted(cfg.lattice, worst->k, rep.cutoff);
    const TruncatedDiracOperator op = assemble(cfg.lattice, cfg.rep, modes, fiber, cfg.potential);
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(probes.size());
    const double probe = random_probe_min(op.matrix(), trials, seed);
    const bool node_ok = probe >= worst->sigma_min * (1.0 - 1e-9);
    ok = ok && node_ok;
    probes.push_back({{"k_index", worst->k_index},
                      {"kappa", number_json(kappa)},
                      {"sigma_min", number_json(worst->sigma_min)},
                      {"probe_min", number_json(probe)},
                      {"trials", trials},
                      {"ok", node_ok}});
  }
  return probes;
}

CommandResult cmd_verify_thomas(const RunConfig& cfg, const Options& opts) {
  const auto& s = cfg.thomas;
  ThomasParams params = base_params(cfg, opts, s.k_points, s.kappas, s.cutoff, s.sphere_samples);
  const Theorem2Report base = verify_theorem2(cfg.lattice, cfg.rep, cfg.potential, params, s.theta);

  int code = base.holds ? kPass : kCheckFailed;
  Json r;
  r["theorem2"] = to_json(base);
  if (s.refine > 0.0) {
    params.cutoff = base.cutoff * s.refine;
    const Theorem2Report refined = verify_theorem2(cfg.lattice, cfg.rep, cfg.potential, params, s.theta);
    const RefinementComparison cmp = compare_refinement(base, refined);
    Json ref;
    ref["factor"] = number_json(s.refine);
    ref["cutoff"] = number_json(refined.cutoff);
    ref["kappa_star"] = refined.kappa_star ? number_json(*refined.kappa_star) : Json(nullptr);
    Json mins = Json::array();
    for (double m : refined.min_sigma_per_kappa) mins.push_back(number_json(m));
    ref["min_sigma_per_kappa"] = mins;
    ref["comparison"] = to_json(cmp);
    r["refinement"] = ref;
    if (!cmp.stable) code = kCheckFailed;
  }
  bool probes_ok = true;
  r["probes"] = probe_minima(cfg, base, s.probe_trials, probes_ok);
  if (!probes_ok) code = kCheckFailed;

  Json j = envelope("verify-thomas", cfg, code);
  j["result"] = r;
  std::ostringstream csv;
  write_margin_csv(csv, base);

  CommandResult out;
  out.exit_code = code;
  out.artifacts = {json_artifact("thomas.json", j), {"thomas_margins.csv", csv.str()}};
  out.summary = "verify-thomas: kappa* = " +
                (base.kappa_star ? format_number(*base.kappa_star) : std::string("none")) + ", " +
                status_word(code);
  return out;
}

CommandResult cmd_verify_weighted(const RunConfig& cfg, const Options& opts) {
  const auto& s = cfg.weighted;
  const ThomasParams params = base_params(cfg, opts, s.k_points, s.kappas, s.cutoff, s.sphere_samples);
  const Theorem8Report t8 = verify_theorem8(cfg.lattice, cfg.rep, cfg.potential, params, s.delta, s.beta);
  const C9Report c9 = corollary_c9(cfg.lattice, cfg.rep, cfg.potential, params);

  const int code = t8.holds && c9.holds ? kPass : kCheckFailed;
  Json j = envelope("verify-weighted", cfg, code);
  j["result"] = {{"theorem8", to_json(t8)}, {"c9", to_json(c9)}};

  CommandResult out;
  out.exit_code = code;
  out.artifacts = {json_artifact("weighted.json", j)};
  out.summary = "verify-weighted: delta* = " + format_number(t8.delta_star) +
                ", min sqrt(c9) = " + format_number(c9.min_sqrt_c9) + ", " + status_word(code);
  return out;
}

/// Real-valued random field: `modes` distinct pairs {N, -N} from the box
/// [-extent, extent]^n with complex Gaussian coefficients.
FourierField random_vector_field(const Lattice& lattice, int modes, int extent, double amplitude,
                                 std::mt19937_64& rng) {
  const int n = lattice.dimension();
  FourierField A = FourierField::vector(lattice);
  std::uniform_int_distribution<int> coord(-extent, extent);
  std::normal_distribution<double> normal;
  std::set<IntVec> used;
  int placed = 0;
  for (int attempts = 0; placed < modes && attempts < 1000 * modes; ++attempts) {
    IntVec N(static_cast<std::size_t>(n));
    for (auto& c : N) c = coord(rng);
    if (is_zero(N) || used.count(N)) continue;
    used.insert(N);
    used.insert(negated(N));
    CMatrix c(n, 1);
    for (int i = 0; i < n; ++i) c(i, 0) = amplitude * cplx(normal(rng), normal(rng));
    A.set(N, c);
    A.set(negated(N), c.conjugate());
    ++placed;
  }
  return A;
}

CommandResult cmd_lemma1(const RunConfig& cfg, const Options&) {
  const auto& s = cfg.lemma1;
  const IntVec gamma = gamma_or_default(cfg);
  const RVector e = cfg.lattice.point(gamma).normalized();
  const RVector et = s.et.value_or(RVector(orthogonal_complement(e).col(0)));
  const Frame frame = build_frame(cfg.lattice, gamma, et);
  const double h = cfg.measure.h();
  const double C = default_kernel_constant().C;

  auto check = [&](const FourierField& A) {
    const FourierField At = averaged_potential(A, gamma, cfg.measure, et);
    return lemma1_check(A, At, frame, cfg.measure, h, C);
  };

  const Lemma1Report main = check(without_mean(cfg.potential.A));
  int failures = main.passed ? 0 : 1;

  Json trials = Json::array();
  std::mt19937_64 rng(cfg.seed);
  for (int t = 0; t < s.random_trials; ++t) {
    const FourierField A = random_vector_field(cfg.lattice, s.random_modes, s.random_extent, s.random_amplitude, rng);
    const Lemma1Report rep = check(A);
    if (!rep.passed) ++failures;
    trials.push_back({{"trial", t},
                      {"active_modes", rep.active_modes},
                      {"phi1_lo", number_json(rep.phi1.lo)},
                      {"phi2_lo", number_json(rep.phi2.lo)},
                      {"bound", number_json(rep.bound)},
                      {"passed", rep.passed}});
  }

  const int code = failures == 0 ? kPass : kCheckFailed;
  Json j = envelope("lemma1", cfg, code);
  Json r;
  r["gamma"] = intvec_json(gamma);
  r["et"] = vector_json(et);
  r["C"] = number_json(C);
  r["report"] = to_json(main);
  r["random_trials"] = trials;
  r["failures"] = failures;
  j["result"] = r;

  CommandResult out;
  out.exit_code = code;
  out.artifacts = {json_artifact("lemma1.json", j)};
  out.summary = "lemma1: " + std::to_string(failures) + " failures over " + std::to_string(1 + s.random_trials) +
                " fields";
  return out;
}

CommandResult cmd_kernel_constant(const RunConfig& cfg, const Options& opts) {
  KernelQuadrature quad = cfg.kernel.quad;
  quad.threads = opts.threads;
  const KernelConstant k = bessel_kernel_constant(EtaSpec{}, quad);
  constexpr double kRouteTolerance = 1e-4;
  const bool agree = k.cross_residual <= kRouteTolerance;
  const int code = agree ? kPass : kCheckFailed;

  Json j = envelope("kernel-constant", cfg, code);
  j["result"] = {{"constant", to_json(k)},
                 {"route_tolerance", number_json(kRouteTolerance)},
                 {"routes_agree", agree}};

  CommandResult out;
  out.exit_code = code;
  out.artifacts = {json_artifact("kernel_constant.json", j)};
  out.summary = "kernel-constant: C = " + format_number(k.C) + ", routes differ by " + format_number(k.cross_residual);
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"bands",  "check-condition", "find-gamma",     "verify-thomas",
                                              "verify-weighted", "lemma1", "kernel-constant"};
  return names;
}

void apply_overrides(RunConfig& cfg, const Options& opts) {
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.cutoff) {
    if (!(*opts.cutoff > 0.0) || !std::isfinite(*opts.cutoff)) throw ConfigError("--cutoff: must be positive");
    cfg.bands.cutoff = *opts.cutoff;
    cfg.thomas.cutoff = *opts.cutoff;
    cfg.weighted.cutoff = *opts.cutoff;
  }
  if (opts.threads < 1) throw ConfigError("--threads: must be at least 1");
}

CommandResult run_command(const std::string& name, const RunConfig& cfg, const Options& opts) {
  if (name == "bands") return cmd_bands(cfg, opts);
  if (name == "check-condition") return cmd_check_condition(cfg, opts);
  if (name == "find-gamma") return cmd_find_gamma(cfg, opts);
  if (name == "verify-thomas") return cmd_verify_thomas(cfg, opts);
  if (name == "verify-weighted") return cmd_verify_weighted(cfg, opts);
  if (name == "lemma1") return cmd_lemma1(cfg, opts);
  if (name == "kernel-constant") return cmd_kernel_constant(cfg, opts);
  throw ConfigError("unknown command '" + name + "'");
}

void write_artifacts(const CommandResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& a : result.artifacts) {
    const auto path = std::filesystem::path(dir) / a.name;
    std::ofstream f(path, std::ios::binary);
    f << a.bytes;
    if (!f) throw std::runtime_error(path.string() + ": write failed");
  }
}

}  // namespace pdirac::cli
