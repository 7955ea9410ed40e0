#pragma once

#include <ostream>

#include "pdirac/fiber_operator.hpp"

namespace pdirac {

/// Eigenvalues of the fibers at k0 + xi e on a uniform xi grid, all with the
/// same mode window {|2 pi N| <= cutoff}.
struct BandSheet {
  RVector k0;
  RVector e;
  std::vector<double> xi;
  /// energies[i] holds the ascending spectrum at xi[i].
  std::vector<std::vector<double>> energies;
  double cutoff = 0.0;
  std::size_t mode_count = 0;
  std::vector<std::string> warnings;

  std::size_t band_count() const { return energies.empty() ? 0 : energies.front().size(); }
};

/// samples >= 2 points from xi_lo to xi_hi inclusive. Throws
/// std::invalid_argument for non-Hermitian potentials.
BandSheet band_sweep(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot, const RVector& k0,
                     const RVector& e, double xi_lo, double xi_hi, int samples, double cutoff, int threads = 1);

struct EnergyWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// |E| <= half the largest |E| on the sheet. Bands near the truncation edge
/// are artifacts of the window, so only the inner half is inspected.
EnergyWindow default_energy_window(const BandSheet& sheet);

struct BandVariation {
  std::size_t band = 0;  // 0-based position in the ascending order
  double min = 0.0;
  double max = 0.0;
  double variation = 0.0;
  bool suspect_flat = false;
};

struct NonconstancyReport {
  EnergyWindow window;
  double threshold = 1e-6;
  std::vector<BandVariation> bands;  // only bands meeting the window
  std::size_t suspect_count = 0;
};

/// Variation max - min over the sweep for each band that meets the window;
/// variation below `threshold` is flagged. Throws for an empty window.
NonconstancyReport nonconstancy_report(const BandSheet& sheet, const EnergyWindow& window, double threshold = 1e-6);

/// Columns xi, E_1, E_2, ... with 17 significant digits.
void write_band_csv(std::ostream& out, const BandSheet& sheet);

}  // namespace pdirac
