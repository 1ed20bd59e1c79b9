#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "eqaudit/dynamics.hpp"
#include "eqaudit/resonance.hpp"
#include "eqaudit/spectra.hpp"

namespace eqaudit {

// Fixed-format float rendering so identical runs emit identical bytes.
std::string g17(Real value);  // 17 significant digits
std::string g6(Real value);   // 6 significant digits

// Header `index,energy[,occ_0,...,occ_{M-1}]`, energies at 17 significant
// digits, one row per level.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

// Key-value lines appended after the spectrum rows. Resolution-time lines
// appear only for non-degenerate spectra.
void write_gap_stats_footer(std::ostream& out, const GapStats& stats,
                            const std::optional<ResolutionTime>& resolution);

// Single-row `M,c,D,total,kept,extra,ratio`; M and c are blank unless the
// spectrum came from a uniform-cutoff mode system. ratio = extra/kept at 6
// significant digits.
void write_resonance_csv(std::ostream& out, std::optional<Index> modes,
                         std::optional<Index> cutoff, Index dim,
                         const ResonanceCount& count);

// `T,sigma2_T` rows followed by the key-value footer block.
void write_variance_csv(std::ostream& out, const VarianceReport& report);

}  // namespace eqaudit
