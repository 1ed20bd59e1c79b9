#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eqaudit/dynamics.hpp"
#include "eqaudit/resonance.hpp"
#include "eqaudit/spectra.hpp"
#include "eqaudit/types.hpp"

namespace eqaudit {

inline constexpr const char* kToolVersion = "0.1.0";

// Tabular scan output: header, typed rows, ordered metadata. Serializes to
// CSV (metadata as trailing `# key = value` comment lines) and to JSON with
// a metadata object. Blank cells mark values that were not computed.
struct ScanTable {
  using Cell = std::variant<std::int64_t, u128, Real, std::string>;

  std::string name;
  std::vector<std::string> columns;
  std::vector<int> sig_digits;  // per-column float digits; empty -> all 17
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
};

void write_scan_csv(std::ostream& out, const ScanTable& table);
void write_scan_json(std::ostream& out, const ScanTable& table);

struct LogGrid {
  Real lo = 0;
  Real hi = 0;
  Index points = 0;
};

// Log-spaced grid from lo to hi inclusive; lo > 0, points >= 2.
std::vector<Real> log_spaced(const LogGrid& grid);

enum class FrequencyModel { independent, commensurate };

// Exact and counted resonant-quadruple totals against mode number.
// independent uses square-free-root frequencies, commensurate sets all
// frequencies to 1. The analytic column is always present; the counted
// column is blank where D exceeds the gap-list cap. extra_over_kept uses
// the counted total where present, the analytic total otherwise.
ScanTable scan_resonance_growth(Index m_min, Index m_max, Index cutoff,
                                FrequencyModel model, Real epsilon,
                                std::uint64_t seed, const Limits& limits = {},
                                int threads = 1);

// sigma^2(T) against the log-spaced window grid, with the infinite-window
// value, truncated sum and bound repeated per row for plotting.
ScanTable scan_window_variance(const Spectrum& spectrum, const QuantumState& state,
                               const Observable& observable, const LogGrid& t_grid,
                               std::optional<Real> gap_tol = {},
                               const VarianceMethod& method = KernelMethod{},
                               const Limits& limits = {}, int threads = 1);

// Level-spacing statistics of random mode systems (frequencies iid
// U[0.5, 1.5), per-trial seed = seed xor trial). Medians are taken across
// non-degenerate trials; degenerate trials are counted per row. Metadata
// carries the least-squares fit of log median min-gap against M and its
// extrapolation to M = 100.
ScanTable scan_gap_statistics(Index m_min, Index m_max, Index cutoff, Index trials,
                              std::uint64_t seed, std::optional<Real> omega_ref_hz,
                              const Limits& limits = {}, int threads = 1);

// Near-resonance counts of one spectrum across a log-spaced epsilon grid.
ScanTable scan_epsilon(const Spectrum& spectrum, const LogGrid& eps_grid,
                       const Limits& limits = {}, int threads = 1);

}  // namespace eqaudit
