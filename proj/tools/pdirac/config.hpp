#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "pdirac/serialize.hpp"

namespace pdirac::cli {

/// Configuration problem; the message starts with the JSON pointer of the
/// offending value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A number that remembers the rational string it was written as, so the
/// configuration re-emits it unchanged.
struct Scalar {
  double value = 0.0;
  std::string text;
};

struct BandsSection {
  std::optional<RVector> k0;         // zero vector
  std::optional<RVector> direction;  // first axis; normalized on load
  double xi_lo = 0.0;
  double xi_hi = 1.0;
  int samples = 20;
  std::optional<double> cutoff;  // default_cutoff(lattice, 0, W)
  std::optional<EnergyWindow> window;
  double threshold = 1e-6;
};

struct ConditionSection {
  int sphere_samples = 4096;
  ConditionForm form = ConditionForm::kEuclidean;
  int grid = 0;
};

struct AtomSpec {
  RVector direction;  // normalized on load
  double weight = 0.0;
};

struct FindGammaSection {
  std::vector<AtomSpec> atoms;
  double h = 0.1;
  double R0 = 2.0;
  double search_window = 0.0;
  std::optional<double> c1;
  std::optional<double> c2;
};

struct Theorem3Section {
  double q = 0.75;
  double h = 0.25;
  double h1 = 0.5;
  std::vector<double> R0{2.0, 4.0, 8.0};
  int sphere_samples = 256;
};

struct ThomasSection {
  double theta = 0.5;
  int k_points = 5;
  std::vector<double> kappas;  // empty: geometric grid of three values
  std::optional<double> cutoff;
  double refine = 1.25;  // 0 disables the refinement pass
  int sphere_samples = 1024;
  int probe_trials = 200;
};

struct WeightedSection {
  double delta = 0.1;
  double beta = 0.5;
  int k_points = 5;
  std::vector<double> kappas;
  std::optional<double> cutoff;
  int sphere_samples = 1024;
};

struct Lemma1Section {
  std::optional<RVector> et;  // first completion vector of gamma
  int random_trials = 0;
  int random_modes = 4;
  int random_extent = 2;
  double random_amplitude = 0.1;
};

struct KernelSection {
  KernelQuadrature quad;
};

struct RunConfig {
  int dimension = 3;
  std::vector<std::vector<Scalar>> basis;  // rows are E_1..E_n
  Lattice lattice;
  CliffordRep rep;
  PotentialSet potential;
  MeasureSpec measure = MeasureSpec::dirac();
  std::optional<IntVec> gamma;
  std::uint64_t seed = 1;

  BandsSection bands;
  ConditionSection condition;
  FindGammaSection find_gamma;
  std::optional<Theorem3Section> theorem3;
  ThomasSection thomas;
  WeightedSection weighted;
  Lemma1Section lemma1;
  KernelSection kernel;
};

/// Throws ConfigError.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);

/// Canonical form with every default spelled out; reloading it and
/// emitting again gives the same bytes.
Json emit_config(const RunConfig& cfg);
std::string dump_json(const Json& j);

}  // namespace pdirac::cli
