#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace pdirac::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError((path.empty() ? std::string("/") : path) + ": " + what);
}

/// Object walker that records which keys were read and rejects the rest.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_ + "/" + key; }

  const Json* get(const std::string& key) {
    known_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback, double lo, double hi, bool open_lo = false) {
    const Json* v = get(key);
    if (!v) return fallback;
    return checked(*v, at(key), lo, hi, open_lo);
  }

  std::optional<double> optional_number(const std::string& key, double lo, double hi, bool open_lo = false) {
    const Json* v = get(key);
    if (!v) return std::nullopt;
    return checked(*v, at(key), lo, hi, open_lo);
  }

  int integer(const std::string& key, int fallback, int lo, int hi) {
    const Json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(at(key), "expected an integer");
    const auto x = v->get<long long>();
    if (x < lo || x > hi) fail(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(x);
  }

  static double checked(const Json& v, const std::string& path, double lo, double hi, bool open_lo) {
    double x = 0.0;
    try {
      x = parse_scalar(v, path);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
    if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo)) {
      std::ostringstream msg;
      msg << "must lie in " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
      fail(path, msg.str());
    }
    return x;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!known_.count(key)) fail(at(key), "unknown key");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> known_;
};

constexpr double kBig = 1e12;

RVector real_vector(const Json& v, const std::string& path, int n) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) fail(path, "expected " + std::to_string(n) + " numbers");
  RVector out(n);
  for (int i = 0; i < n; ++i)
    out(i) = Reader::checked(v[static_cast<std::size_t>(i)], path + "/" + std::to_string(i), -kBig, kBig, false);
  return out;
}

RVector unit_vector(const Json& v, const std::string& path, int n) {
  RVector out = real_vector(v, path, n);
  const double len = out.norm();
  if (len == 0.0) fail(path, "direction must be nonzero");
  // Leave vectors that are already unit alone so emitted directions reload
  // to the same bits.
  if (std::abs(len - 1.0) <= 8 * std::numeric_limits<double>::epsilon()) return out;
  return out / len;
}

std::vector<double> positive_list(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a nonempty list of positive numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(Reader::checked(v[i], path + "/" + std::to_string(i), 0.0, kBig, true));
  return out;
}

FourierField read_field(Reader& r, const std::string& key, const Lattice& lattice, FieldKind kind, int width) {
  const Json* v = r.get(key);
  if (!v) return FourierField(lattice, kind, width);
  try {
    return field_from_json(*v, lattice, kind, width, r.at(key));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
}

Json number_list(const std::vector<double>& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(number_json(x));
  return out;
}

}  // namespace

RunConfig parse_config(const Json& j) {
  RunConfig cfg;
  Reader top(j, "");

  // Lattice first: it fixes the dimension for everything else.
  int n = top.integer("dimension", 0, 2, 16);
  if (const Json* lat = top.get("lattice")) {
    Reader lr(*lat, "/lattice");
    const Json* basis = lr.get("basis");
    if (!basis || !basis->is_array() || basis->empty()) fail("/lattice/basis", "expected a list of basis rows");
    if (n == 0) n = static_cast<int>(basis->size());
    if (static_cast<int>(basis->size()) != n)
      fail("/lattice/basis", "expected " + std::to_string(n) + " rows to match /dimension");
    for (std::size_t i = 0; i < basis->size(); ++i) {
      const Json& row = (*basis)[i];
      const std::string rp = "/lattice/basis/" + std::to_string(i);
      if (!row.is_array() || static_cast<int>(row.size()) != n) fail(rp, "expected " + std::to_string(n) + " entries");
      std::vector<Scalar> out;
      for (std::size_t k = 0; k < row.size(); ++k) {
        const std::string ep = rp + "/" + std::to_string(k);
        Scalar s;
        s.value = Reader::checked(row[k], ep, -kBig, kBig, false);
        if (row[k].is_string()) s.text = row[k].get<std::string>();
        out.push_back(s);
      }
      cfg.basis.push_back(out);
    }
    lr.finish();
  } else {
    if (n == 0) n = 3;
    for (int i = 0; i < n; ++i) {
      std::vector<Scalar> row(static_cast<std::size_t>(n));
      row[static_cast<std::size_t>(i)].value = 1.0;
      cfg.basis.push_back(row);
    }
  }
  cfg.dimension = n;
  RMatrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) B(k, i) = cfg.basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].value;
  if (!(std::abs(B.determinant()) > 1e-12 * std::pow(B.norm(), n))) fail("/lattice/basis", "basis is singular");
  cfg.lattice = Lattice(B);
  cfg.rep = build_clifford(n);

  cfg.potential = PotentialSet::zero(cfg.lattice, cfg.rep);
  if (const Json* pot = top.get("potential")) {
    Reader pr(*pot, "/potential");
    cfg.potential.A = read_field(pr, "A", cfg.lattice, FieldKind::kVector, n);
    cfg.potential.V0 = read_field(pr, "V0", cfg.lattice, FieldKind::kMatrix, cfg.rep.size());
    cfg.potential.V1 = read_field(pr, "V1", cfg.lattice, FieldKind::kMatrix, cfg.rep.size());
    pr.finish();
    try {
      cfg.potential.validate();
    } catch (const std::invalid_argument& ex) {
      fail("/potential", ex.what());
    }
    if (!cfg.potential.A.is_real_valued(1e-12)) fail("/potential/A", "A must be real-valued: A_{-N} = conj(A_N)");
    if (!cfg.potential.V0.is_hermitian_valued(1e-12) && !cfg.potential.V0.empty())
      fail("/potential/V0", "V0 must be Hermitian-valued: V_{-N} = V_N^dagger");
    if (!cfg.potential.V1.is_hermitian_valued(1e-12) && !cfg.potential.V1.empty())
      fail("/potential/V1", "V1 must be Hermitian-valued: V_{-N} = V_N^dagger");
  }

  if (const Json* mu = top.get("measure")) {
    try {
      cfg.measure = measure_from_json(*mu, "/measure");
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
  }

  if (const Json* g = top.get("gamma")) {
    if (!g->is_array() || static_cast<int>(g->size()) != n)
      fail("/gamma", "expected " + std::to_string(n) + " integer lattice coordinates");
    IntVec gamma;
    for (std::size_t i = 0; i < g->size(); ++i) {
      try {
        gamma.push_back(parse_integer((*g)[i], "/gamma/" + std::to_string(i)));
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(ex.what());
      }
    }
    if (is_zero(gamma)) fail("/gamma", "gamma must be nonzero");
    cfg.gamma = gamma;
  }

  if (const Json* s = top.get("seed")) {
    if (!s->is_number_unsigned()) fail("/seed", "expected a nonnegative integer");
    cfg.seed = s->get<std::uint64_t>();
  }

  if (const Json* b = top.get("bands")) {
    Reader r(*b, "/bands");
    auto& s = cfg.bands;
    if (const Json* v = r.get("k0")) s.k0 = real_vector(*v, r.at("k0"), n);
    if (const Json* v = r.get("direction")) s.direction = unit_vector(*v, r.at("direction"), n);
    if (const Json* v = r.get("xi")) {
      if (!v->is_array() || v->size() != 2) fail(r.at("xi"), "expected [lo, hi]");
      s.xi_lo = Reader::checked((*v)[0], r.at("xi") + "/0", -kBig, kBig, false);
      s.xi_hi = Reader::checked((*v)[1], r.at("xi") + "/1", -kBig, kBig, false);
      if (!(s.xi_hi > s.xi_lo)) fail(r.at("xi"), "hi must exceed lo");
    }
    s.samples = r.integer("samples", s.samples, 2, 100000);
    s.cutoff = r.optional_number("cutoff", 0.0, kBig, true);
    if (const Json* v = r.get("energy_window")) {
      if (!v->is_array() || v->size() != 2) fail(r.at("energy_window"), "expected [lo, hi]");
      EnergyWindow w{Reader::checked((*v)[0], r.at("energy_window") + "/0", -kBig, kBig, false),
                     Reader::checked((*v)[1], r.at("energy_window") + "/1", -kBig, kBig, false)};
      if (!(w.hi > w.lo)) fail(r.at("energy_window"), "empty energy window");
      s.window = w;
    }
    s.threshold = r.number("threshold", s.threshold, 0.0, kBig);
    r.finish();
  }

  if (const Json* c = top.get("condition")) {
    Reader r(*c, "/condition");
    auto& s = cfg.condition;
    s.sphere_samples = r.integer("sphere_samples", s.sphere_samples, 1, 1 << 22);
    if (const Json* f = r.get("form")) {
      const std::string form = f->is_string() ? f->get<std::string>() : "";
      if (form == "euclidean")
        s.form = ConditionForm::kEuclidean;
      else if (form == "transverse")
        s.form = ConditionForm::kTransverse;
      else
        fail(r.at("form"), "expected \"euclidean\" or \"transverse\"");
    }
    s.grid = r.integer("grid", s.grid, 0, 4096);
    r.finish();
  }

  if (const Json* f = top.get("find_gamma")) {
    Reader r(*f, "/find_gamma");
    auto& s = cfg.find_gamma;
    if (const Json* atoms = r.get("atoms")) {
      if (!atoms->is_array()) fail(r.at("atoms"), "expected a list of atoms");
      for (std::size_t i = 0; i < atoms->size(); ++i) {
        Reader ar((*atoms)[i], r.at("atoms") + "/" + std::to_string(i));
        const Json* d = ar.get("direction");
        if (!d) fail(ar.at("direction"), "missing");
        AtomSpec atom;
        atom.direction = unit_vector(*d, ar.at("direction"), n);
        atom.weight = ar.number("weight", 1.0, 0.0, kBig);
        ar.finish();
        s.atoms.push_back(atom);
      }
    }
    s.h = r.number("h", s.h, 0.0, kBig, true);
    s.R0 = r.number("R0", s.R0, 0.0, kBig, true);
    s.search_window = r.number("search_window", s.search_window, 0.0, kBig);
    s.c1 = r.optional_number("c1", 0.0, kBig, true);
    s.c2 = r.optional_number("c2", 0.0, kBig, true);
    r.finish();
  }

  if (const Json* t = top.get("theorem3")) {
    Reader r(*t, "/theorem3");
    Theorem3Section s;
    s.q = r.number("q", s.q, 0.0, 64.0, true);
    if (!(2.0 * s.q > n - 2)) fail(r.at("q"), "requires 2q > n - 2");
    s.h = r.number("h", s.h, 0.0, kBig, true);
    s.h1 = r.number("h1", s.h1, 0.0, kBig, true);
    if (!(s.h1 > s.h)) fail(r.at("h1"), "h1 must exceed h");
    if (const Json* v = r.get("R0")) s.R0 = positive_list(*v, r.at("R0"));
    s.sphere_samples = r.integer("sphere_samples", s.sphere_samples, 1, 1 << 20);
    r.finish();
    cfg.theorem3 = s;
  }

  if (const Json* t = top.get("thomas")) {
    Reader r(*t, "/thomas");
    auto& s = cfg.thomas;
    s.theta = r.number("theta", s.theta, 0.0, 1.0, true);
    s.k_points = r.integer("k_points", s.k_points, 1, 64);
    if (const Json* v = r.get("kappas")) s.kappas = positive_list(*v, r.at("kappas"));
    s.cutoff = r.optional_number("cutoff", 0.0, kBig, true);
    s.refine = r.number("refine", s.refine, 0.0, 16.0);
    if (s.refine != 0.0 && !(s.refine > 1.0)) fail(r.at("refine"), "must be 0 or above 1");
    s.sphere_samples = r.integer("sphere_samples", s.sphere_samples, 1, 1 << 22);
    s.probe_trials = r.integer("probe_trials", s.probe_trials, 0, 1 << 24);
    r.finish();
  }

  if (const Json* w = top.get("weighted")) {
    Reader r(*w, "/weighted");
    auto& s = cfg.weighted;
    s.delta = r.number("delta", s.delta, 0.0, 1.0, true);
    if (s.delta >= 1.0) fail(r.at("delta"), "must lie in (0, 1)");
    s.beta = r.number("beta", s.beta, 0.0, kBig, true);
    s.k_points = r.integer("k_points", s.k_points, 1, 64);
    if (const Json* v = r.get("kappas")) s.kappas = positive_list(*v, r.at("kappas"));
    s.cutoff = r.optional_number("cutoff", 0.0, kBig, true);
    s.sphere_samples = r.integer("sphere_samples", s.sphere_samples, 1, 1 << 22);
    r.finish();
  }

  if (const Json* l = top.get("lemma1")) {
    Reader r(*l, "/lemma1");
    auto& s = cfg.lemma1;
    if (const Json* v = r.get("et")) s.et = unit_vector(*v, r.at("et"), n);
    s.random_trials = r.integer("random_trials", s.random_trials, 0, 1 << 20);
    s.random_modes = r.integer("random_modes", s.random_modes, 1, 1024);
    s.random_extent = r.integer("random_extent", s.random_extent, 1, 64);
    s.random_amplitude = r.number("random_amplitude", s.random_amplitude, 0.0, kBig, true);
    r.finish();
  }

  if (const Json* k = top.get("kernel")) {
    Reader r(*k, "/kernel");
    auto& q = cfg.kernel.quad;
    q.radial_step = r.number("radial_step", q.radial_step, 0.0, 10.0, true);
    q.initial_radius = r.number("initial_radius", q.initial_radius, 0.0, 1e6, true);
    q.max_radius = r.number("max_radius", q.max_radius, 0.0, 1e6, true);
    q.tail_tolerance = r.number("tail_tolerance", q.tail_tolerance, 0.0, 1.0, true);
    q.cross_step = r.number("cross_step", q.cross_step, 0.0, 10.0, true);
    q.angular_panels = r.integer("angular_panels", q.angular_panels, 1, 1024);
    r.finish();
  }

  top.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& ex) {
    throw ConfigError(path + ": invalid JSON: " + ex.what());
  }
  return parse_config(j);
}

Json emit_config(const RunConfig& cfg) {
  Json j;
  j["dimension"] = cfg.dimension;
  Json basis = Json::array();
  for (const auto& row : cfg.basis) {
    Json r = Json::array();
    for (const Scalar& s : row) r.push_back(s.text.empty() ? number_json(s.value) : Json(s.text));
    basis.push_back(r);
  }
  j["lattice"] = {{"basis", basis}};
  j["potential"] = {{"A", to_json(cfg.potential.A)},
                    {"V0", to_json(cfg.potential.V0)},
                    {"V1", to_json(cfg.potential.V1)}};
  j["measure"] = to_json(cfg.measure);
  if (cfg.gamma) j["gamma"] = intvec_json(*cfg.gamma);
  j["seed"] = cfg.seed;

  {
    const auto& s = cfg.bands;
    Json b;
    if (s.k0) b["k0"] = vector_json(*s.k0);
    if (s.direction) b["direction"] = vector_json(*s.direction);
    b["xi"] = number_list({s.xi_lo, s.xi_hi});
    b["samples"] = s.samples;
    if (s.cutoff) b["cutoff"] = number_json(*s.cutoff);
    if (s.window) b["energy_window"] = number_list({s.window->lo, s.window->hi});
    b["threshold"] = number_json(s.threshold);
    j["bands"] = b;
  }
  j["condition"] = {{"sphere_samples", cfg.condition.sphere_samples},
                    {"form", cfg.condition.form == ConditionForm::kEuclidean ? "euclidean" : "transverse"},
                    {"grid", cfg.condition.grid}};
  {
    const auto& s = cfg.find_gamma;
    Json f;
    Json atoms = Json::array();
    for (const auto& a : s.atoms) atoms.push_back({{"direction", vector_json(a.direction)}, {"weight", number_json(a.weight)}});
    f["atoms"] = atoms;
    f["h"] = number_json(s.h);
    f["R0"] = number_json(s.R0);
    f["search_window"] = number_json(s.search_window);
    if (s.c1) f["c1"] = number_json(*s.c1);
    if (s.c2) f["c2"] = number_json(*s.c2);
    j["find_gamma"] = f;
  }
  if (cfg.theorem3) {
    const auto& s = *cfg.theorem3;
    j["theorem3"] = {{"q", number_json(s.q)},
                     {"h", number_json(s.h)},
                     {"h1", number_json(s.h1)},
                     {"R0", number_list(s.R0)},
                     {"sphere_samples", s.sphere_samples}};
  }
  {
    const auto& s = cfg.thomas;
    Json t;
    t["theta"] = number_json(s.theta);
    t["k_points"] = s.k_points;
    if (!s.kappas.empty()) t["kappas"] = number_list(s.kappas);
    if (s.cutoff) t["cutoff"] = number_json(*s.cutoff);
    t["refine"] = number_json(s.refine);
    t["sphere_samples"] = s.sphere_samples;
    t["probe_trials"] = s.probe_trials;
    j["thomas"] = t;
  }
  {
    const auto& s = cfg.weighted;
    Json w;
    w["delta"] = number_json(s.delta);
    w["beta"] = number_json(s.beta);
    w["k_points"] = s.k_points;
    if (!s.kappas.empty()) w["kappas"] = number_list(s.kappas);
    if (s.cutoff) w["cutoff"] = number_json(*s.cutoff);
    w["sphere_samples"] = s.sphere_samples;
    j["weighted"] = w;
  }
  {
    const auto& s = cfg.lemma1;
    Json l;
    if (s.et) l["et"] = vector_json(*s.et);
    l["random_trials"] = s.random_trials;
    l["random_modes"] = s.random_modes;
    l["random_extent"] = s.random_extent;
    l["random_amplitude"] = number_json(s.random_amplitude);
    j["lemma1"] = l;
  }
  {
    const auto& q = cfg.kernel.quad;
    j["kernel"] = {{"radial_step", number_json(q.radial_step)},
                   {"initial_radius", number_json(q.initial_radius)},
                   {"max_radius", number_json(q.max_radius)},
                   {"tail_tolerance", number_json(q.tail_tolerance)},
                   {"cross_step", number_json(q.cross_step)},
                   {"angular_panels", q.angular_panels}};
  }
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace pdirac::cli
