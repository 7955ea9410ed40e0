#include "pdirac/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pdirac {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

Json complex_json(cplx z) { return Json::array({number_json(z.real()), number_json(z.imag())}); }

Json vector_json(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

Json intvec_json(const IntVec& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x);
  return out;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument((path.empty() ? std::string("/") : path) + ": " + what);
}

bool parse_ll(std::string_view s, long long& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

bool parse_rational(const std::string& s, long long& p, long long& q) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    q = 1;
    return parse_ll(s, p);
  }
  return parse_ll(std::string_view(s).substr(0, slash), p) && parse_ll(std::string_view(s).substr(slash + 1), q) &&
         q != 0;
}

}  // namespace

double parse_scalar(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    long long p = 0, q = 1;
    if (!parse_rational(j.get<std::string>(), p, q)) fail(path, "expected a number or a rational string \"p/q\"");
    return static_cast<double>(p) / static_cast<double>(q);
  }
  fail(path, "expected a number or a rational string \"p/q\"");
}

cplx parse_complex(const Json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) fail(path, "complex numbers are written as [re, im]");
    return {parse_scalar(j[0], path + "/0"), parse_scalar(j[1], path + "/1")};
  }
  return parse_scalar(j, path);
}

int parse_integer(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) {
    long long p = 0, q = 1;
    if (parse_rational(j.get<std::string>(), p, q) && p % q == 0) return static_cast<int>(p / q);
  }
  fail(path, "expected an integer");
}

Json to_json(const MeasureSpec& mu) {
  Json j;
  if (mu.kind() == MeasureKind::kDirac) {
    j["kind"] = "dirac";
    if (std::isfinite(mu.h())) j["h"] = mu.h();
  } else {
    j["kind"] = "plateau";
    j["h"] = mu.h();
    j["h1"] = mu.h1();
  }
  return j;
}

MeasureSpec measure_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a measure object");
  for (const auto& [key, value] : j.items())
    if (key != "kind" && key != "h" && key != "h1") fail(path + "/" + key, "unknown key");
  if (!j.contains("kind") || !j["kind"].is_string()) fail(path + "/kind", "expected \"dirac\" or \"plateau\"");
  const auto kind = j["kind"].get<std::string>();
  try {
    if (kind == "dirac") {
      if (j.contains("h1")) fail(path + "/h1", "not used by the dirac measure");
      return j.contains("h") ? MeasureSpec::dirac(parse_scalar(j["h"], path + "/h")) : MeasureSpec::dirac();
    }
    if (kind == "plateau") {
      if (!j.contains("h") || !j.contains("h1")) fail(path, "plateau measure needs h and h1");
      return MeasureSpec::plateau(parse_scalar(j["h"], path + "/h"), parse_scalar(j["h1"], path + "/h1"));
    }
  } catch (const std::invalid_argument& ex) {
    const std::string msg = ex.what();
    if (!msg.empty() && msg.front() == '/') throw;
    fail(path, msg);
  }
  fail(path + "/kind", "expected \"dirac\" or \"plateau\"");
}

Json to_json(const FourierField& field) {
  Json out = Json::array();
  for (const auto& [N, c] : field.coeffs()) {
    Json entry;
    entry["N"] = intvec_json(N);
    switch (field.kind()) {
      case FieldKind::kScalar: entry["value"] = complex_json(c(0, 0)); break;
      case FieldKind::kVector: {
        Json v = Json::array();
        for (Eigen::Index i = 0; i < c.rows(); ++i) v.push_back(complex_json(c(i, 0)));
        entry["value"] = v;
        break;
      }
      case FieldKind::kMatrix: {
        Json rows = Json::array();
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
          Json row = Json::array();
          for (Eigen::Index k = 0; k < c.cols(); ++k) row.push_back(complex_json(c(i, k)));
          rows.push_back(row);
        }
        entry["value"] = rows;
        break;
      }
    }
    out.push_back(entry);
  }
  return out;
}

FourierField field_from_json(const Json& j, const Lattice& lattice, FieldKind kind, int width,
                             const std::string& path) {
  FourierField field(lattice, kind, width);
  if (!j.is_array()) fail(path, "expected a list of {\"N\": [...], \"value\": ...} records");
  const int n = lattice.dimension();
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string at = path + "/" + std::to_string(r);
    const Json& rec = j[r];
    if (!rec.is_object()) fail(at, "expected an object");
    for (const auto& [key, value] : rec.items())
      if (key != "N" && key != "value") fail(at + "/" + key, "unknown key");
    if (!rec.contains("N") || !rec["N"].is_array() || static_cast<int>(rec["N"].size()) != n)
      fail(at + "/N", "expected " + std::to_string(n) + " integer coordinates");
    if (!rec.contains("value")) fail(at + "/value", "missing");
    IntVec N(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      N[static_cast<std::size_t>(i)] = parse_integer(rec["N"][static_cast<std::size_t>(i)], at + "/N/" + std::to_string(i));
    if (field.coeffs().count(N)) fail(at + "/N", "duplicate mode " + to_string(N));
    const Json& v = rec["value"];
    const std::string vp = at + "/value";
    CMatrix c(field.rows(), field.cols());
    switch (kind) {
      case FieldKind::kScalar: c(0, 0) = parse_complex(v, vp); break;
      case FieldKind::kVector:
        if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != field.rows())
          fail(vp, "expected " + std::to_string(field.rows()) + " complex components");
        for (Eigen::Index i = 0; i < field.rows(); ++i)
          c(i, 0) = parse_complex(v[static_cast<std::size_t>(i)], vp + "/" + std::to_string(i));
        break;
      case FieldKind::kMatrix:
        if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != field.rows())
          fail(vp, "expected " + std::to_string(field.rows()) + " rows");
        for (Eigen::Index i = 0; i < field.rows(); ++i) {
          const Json& row = v[static_cast<std::size_t>(i)];
          const std::string rp = vp + "/" + std::to_string(i);
          if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != field.cols())
            fail(rp, "expected " + std::to_string(field.cols()) + " entries");
          for (Eigen::Index k = 0; k < field.cols(); ++k)
            c(i, k) = parse_complex(row[static_cast<std::size_t>(k)], rp + "/" + std::to_string(k));
        }
        break;
    }
    field.set(N, c);
  }
  return field;
}

Json to_json(const NormBracket& b) {
  Json j;
  j["lo"] = number_json(b.lo);
  j["hi"] = number_json(b.hi);
  return j;
}

Json to_json(const ConditionBracket& b) {
  Json j;
  j["lo"] = number_json(b.lo);
  j["hi"] = number_json(b.hi);
  j["best_et"] = b.best_et.size() ? vector_json(b.best_et) : Json::array();
  j["sphere_samples"] = b.samples;
  j["grid_per_axis"] = b.grid_per_axis;
  return j;
}

Json to_json(const GammaCertificate& c) {
  Json j;
  j["gamma"] = intvec_json(c.gamma);
  j["gamma_cartesian"] = vector_json(c.gamma_cart);
  j["length"] = number_json(c.length);
  j["R0"] = number_json(c.R0);
  j["h"] = number_json(c.h);
  j["slab_weight"] = number_json(c.slab_weight);
  j["total_weight"] = number_json(c.total_weight);
  j["slab_ratio"] = number_json(c.slab_ratio);
  j["min_orthogonal"] = number_json(c.min_orth);
  j["min_orthogonal_length"] = number_json(c.min_orth_length);
  j["min_orthogonal_vector"] = c.min_orth_vector ? intvec_json(*c.min_orth_vector) : Json();
  j["orthogonal_window"] = number_json(c.orth_window);
  return j;
}

Json to_json(const KernelConstant& k) {
  Json j;
  j["C"] = number_json(k.C);
  j["eta"] = {{"kind", "smooth_step"}, {"lo", number_json(kPi)}, {"hi", number_json(kTwoPi)},
              {"scale", number_json(k.eta_scale)}};
  j["profile_at_zero"] = number_json(k.g0);
  j["radial_integral"] = number_json(k.radial_integral);
  j["kernel_l1"] = number_json(k.kernel_l1);
  j["truncation_radius"] = number_json(k.truncation_radius);
  j["tail_estimate"] = number_json(k.tail_estimate);
  j["C_cross_check"] = number_json(k.C_cross);
  j["cross_check_residual"] = number_json(k.cross_residual);
  return j;
}

Json to_json(const Lemma1Report& r) {
  Json j;
  j["t"] = number_json(r.t);
  j["A_sup_hi"] = number_json(r.a_sup_hi);
  j["bound"] = number_json(r.bound);
  j["phi1"] = to_json(r.phi1);
  j["phi2"] = to_json(r.phi2);
  j["bound_ok"] = r.bound_ok;
  j["multiplier_ok"] = r.multiplier_ok;
  j["active_modes"] = r.active_modes;
  j["passed"] = r.passed;
  return j;
}

Json to_json(const NonconstancyReport& r) {
  Json j;
  j["window"] = {{"lo", number_json(r.window.lo)}, {"hi", number_json(r.window.hi)}};
  j["threshold"] = number_json(r.threshold);
  j["suspect_flat"] = r.suspect_count;
  Json bands = Json::array();
  for (const auto& b : r.bands) {
    Json e;
    e["band"] = b.band + 1;
    e["min"] = number_json(b.min);
    e["max"] = number_json(b.max);
    e["variation"] = number_json(b.variation);
    e["suspect_flat"] = b.suspect_flat;
    bands.push_back(e);
  }
  j["bands"] = bands;
  return j;
}

namespace {

Json optional_number(const std::optional<double>& x) { return x ? number_json(*x) : Json(); }

}  // namespace

Json to_json(const Theorem2Report& r) {
  Json j;
  j["label"] = "EMPIRICAL";
  j["gamma"] = intvec_json(r.gamma);
  j["gamma_length"] = number_json(r.gamma_length);
  j["measure"] = to_json(r.mu);
  j["theta_tilde"] = to_json(r.theta_tilde);
  j["theta"] = number_json(r.theta);
  j["C"] = number_json(r.C);
  j["c5"] = number_json(r.c5);
  j["bound"] = number_json(r.bound);
  j["cutoff"] = number_json(r.cutoff);
  Json ks = Json::array();
  for (const auto& k : r.k_grid) ks.push_back(vector_json(k));
  j["k_grid"] = ks;
  Json kap = Json::array();
  for (double k : r.kappas) kap.push_back(number_json(k));
  j["kappas"] = kap;
  Json mins = Json::array();
  for (double m : r.min_sigma_per_kappa) mins.push_back(number_json(m));
  j["min_sigma_per_kappa"] = mins;
  j["kappa_star"] = optional_number(r.kappa_star);
  j["holds"] = r.holds;
  Json nodes = Json::array();
  for (const auto& n : r.nodes) {
    Json e;
    e["k_index"] = n.k_index;
    e["kappa"] = number_json(n.kappa);
    e["modes"] = n.mode_count;
    e["sigma_min"] = number_json(n.sigma_min);
    e["free_sigma_min"] = number_json(n.free_sigma_min);
    e["margin"] = number_json(n.margin);
    nodes.push_back(e);
  }
  j["nodes"] = nodes;
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const RefinementComparison& c) {
  Json j;
  j["kappa_star_base"] = optional_number(c.kappa_star_base);
  j["kappa_star_refined"] = optional_number(c.kappa_star_refined);
  j["max_relative_change"] = number_json(c.max_relative_change);
  j["stable"] = c.stable;
  return j;
}

Json to_json(const Theorem8Report& r) {
  Json j;
  j["label"] = "EMPIRICAL";
  j["gamma"] = intvec_json(r.gamma);
  j["gamma_length"] = number_json(r.gamma_length);
  j["theta_tilde"] = to_json(r.theta_tilde);
  j["C"] = number_json(r.C);
  j["c5"] = number_json(r.c5);
  j["delta"] = number_json(r.delta);
  j["beta"] = number_json(r.beta);
  j["inner_weight"] = number_json(r.inner_weight);
  j["cutoff"] = number_json(r.cutoff);
  j["min_ratio"] = number_json(r.min_ratio);
  j["delta_star"] = number_json(r.delta_star);
  j["holds"] = r.holds;
  Json nodes = Json::array();
  for (const auto& n : r.nodes) {
    Json e;
    e["k_index"] = n.k_index;
    e["kappa"] = number_json(n.kappa);
    e["modes"] = n.mode_count;
    e["annulus_modes"] = n.k_beta_count;
    e["ratio"] = number_json(n.ratio);
    e["ok"] = n.ok;
    nodes.push_back(e);
  }
  j["nodes"] = nodes;
  return j;
}

Json to_json(const C9Report& r) {
  Json j;
  j["label"] = "EMPIRICAL";
  j["potential_coefficient_sum"] = number_json(r.w);
  j["cutoff"] = number_json(r.cutoff);
  j["min_sqrt_c9"] = number_json(r.min_sqrt_c9);
  j["holds"] = r.holds;
  Json nodes = Json::array();
  for (const auto& n : r.nodes) {
    Json e;
    e["k_index"] = n.k_index;
    e["kappa"] = number_json(n.kappa);
    e["modes"] = n.mode_count;
    e["sqrt_c9"] = number_json(n.sqrt_c9);
    e["perturbation_bound"] = number_json(n.perturbation_bound);
    e["ok"] = n.ok;
    nodes.push_back(e);
  }
  j["nodes"] = nodes;
  return j;
}

Json to_json(const Theorem3Report& r) {
  Json j;
  j["q"] = number_json(r.q);
  j["h"] = number_json(r.h);
  j["h1"] = number_json(r.h1);
  j["atoms"] = r.atoms;
  j["weighted_total"] = number_json(r.weighted_total);
  j["chain_ok"] = r.chain_ok;
  j["outer_decreasing"] = r.outer_decreasing;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json x;
    x["R0"] = number_json(e.R0);
    x["slab_h"] = number_json(e.slab_h);
    x["certificate"] = to_json(e.certificate);
    x["F"] = to_json(e.f);
    x["orthogonal_modes"] = e.orthogonal_modes;
    x["orthogonal_weight"] = number_json(e.orthogonal_weight);
    x["F_lo_max"] = number_json(e.f_lo_max);
    x["middle_max"] = number_json(e.middle_max);
    x["outer_max"] = number_json(e.outer_max);
    x["sampled_directions"] = e.samples.size();
    x["chain_ok"] = e.chain_ok;
    entries.push_back(x);
  }
  j["entries"] = entries;
  return j;
}

void write_margin_csv(std::ostream& out, const Theorem2Report& r) {
  out << "k_index,kappa,sigma_min,bound,margin\n";
  for (const auto& n : r.nodes)
    out << n.k_index << ',' << format_number(n.kappa) << ',' << format_number(n.sigma_min) << ','
        << format_number(n.bound) << ',' << format_number(n.margin) << '\n';
}

}  // namespace pdirac
