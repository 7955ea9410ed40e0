#include "pdirac/bands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdirac/serialize.hpp"

namespace pdirac {

BandSheet band_sweep(const Lattice& lattice, const CliffordRep& rep, const PotentialSet& pot, const RVector& k0,
                     const RVector& e, double xi_lo, double xi_hi, int samples, double cutoff, int threads) {
  if (samples < 2) throw std::invalid_argument("band_sweep: at least two samples are required");
  if (!(xi_hi > xi_lo)) throw std::invalid_argument("band_sweep: xi range must be increasing");
  const ModeSet modes = ModeSet::within_cutoff(lattice, cutoff);
  BandSheet sheet;
  sheet.k0 = k0;
  sheet.e = e;
  sheet.cutoff = cutoff;
  sheet.mode_count = modes.size();
  for (int i = 0; i < samples; ++i)
    sheet.xi.push_back(xi_lo + (xi_hi - xi_lo) * static_cast<double>(i) / (samples - 1));
  sheet.energies.resize(sheet.xi.size());
  std::vector<std::vector<std::string>> warnings(sheet.xi.size());
  parallel_for(sheet.xi.size(), threads, [&](std::size_t i) {
    const FiberPoint fiber{k0 + sheet.xi[i] * e, e, 0.0};
    const auto op = assemble(lattice, rep, modes, fiber, pot);
    sheet.energies[i] = eigenvalues(op);
    warnings[i] = op.warnings();
  });
  if (!warnings.front().empty()) sheet.warnings = warnings.front();
  return sheet;
}

EnergyWindow default_energy_window(const BandSheet& sheet) {
  double top = 0.0;
  for (const auto& row : sheet.energies)
    for (double E : row) top = std::max(top, std::abs(E));
  return {-top / 2.0, top / 2.0};
}

NonconstancyReport nonconstancy_report(const BandSheet& sheet, const EnergyWindow& window, double threshold) {
  if (!(window.hi > window.lo)) throw std::invalid_argument("nonconstancy_report: empty energy window");
  NonconstancyReport r;
  r.window = window;
  r.threshold = threshold;
  for (std::size_t b = 0; b < sheet.band_count(); ++b) {
    BandVariation v;
    v.band = b;
    v.min = std::numeric_limits<double>::infinity();
    v.max = -std::numeric_limits<double>::infinity();
    for (const auto& row : sheet.energies) {
      v.min = std::min(v.min, row[b]);
      v.max = std::max(v.max, row[b]);
    }
    if (v.max < window.lo || v.min > window.hi) continue;
    v.variation = v.max - v.min;
    v.suspect_flat = v.variation < threshold;
    if (v.suspect_flat) ++r.suspect_count;
    r.bands.push_back(v);
  }
  return r;
}

void write_band_csv(std::ostream& out, const BandSheet& sheet) {
  out << "xi";
  for (std::size_t b = 0; b < sheet.band_count(); ++b) out << ",E_" << (b + 1);
  out << '\n';
  for (std::size_t i = 0; i < sheet.xi.size(); ++i) {
    out << format_number(sheet.xi[i]);
    for (double E : sheet.energies[i]) out << ',' << format_number(E);
    out << '\n';
  }
}

}  // namespace pdirac
