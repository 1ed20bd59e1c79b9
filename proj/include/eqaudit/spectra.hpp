#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "eqaudit/types.hpp"

namespace eqaudit {

// A quadratic Hamiltonian: M independent quasi-particle modes with
// frequencies w_i (hbar = 1) and per-mode occupation cutoffs c_i. Eigenstates
// are occupation vectors n with energy sum_i n_i w_i; the truncated space has
// prod_i (c_i + 1) levels.
struct ModeSystem {
  Eigen::VectorXd frequencies;
  Eigen::VectorXi cutoffs;

  Index mode_count() const { return frequencies.size(); }
  u128 dimension() const;  // prod (c_i + 1), overflow-checked
  void validate() const;
};

ModeSystem uniform_cutoff_system(const Eigen::VectorXd& frequencies, int cutoff);

// Single mode, w = 1, cutoff dim - 1: equally spaced levels 0..dim-1.
ModeSystem ladder_system(Index dim);

// Frequencies sqrt(s) over the first `count` square-free integers. Pairwise
// incommensurate, so a gap-pair sum over occupation vectors vanishes only
// when every mode balances: j_i + m_i = k_i + n_i.
Eigen::VectorXd square_free_frequencies(Index count);

enum class SpectrumOrigin { mode_system, uniform_random, goe, explicit_list };

struct Spectrum {
  Eigen::VectorXd energies;             // non-decreasing
  std::vector<Eigen::VectorXi> labels;  // occupation vectors; empty if none
  SpectrumOrigin origin = SpectrumOrigin::explicit_list;

  Index dim() const { return energies.size(); }
  bool has_labels() const { return !labels.empty(); }
  Real span() const { return dim() > 0 ? energies(dim() - 1) - energies(0) : 0.0; }
};

// All occupation vectors of the system, sorted by energy with lexicographic
// tie order on the occupation vector.
Spectrum build_mode_spectrum(const ModeSystem& system, const Limits& limits = {});

struct UniformModel {
  Real span = 1.0;
};
struct GoeModel {};
using RandomSpectrumModel = std::variant<UniformModel, GoeModel>;

// uniform: dim independent draws from [0, span), sorted. goe: eigenvalues of
// a real symmetric matrix with independent Gaussian entries (off-diagonal
// variance 1, diagonal variance 2). Deterministic given (dim, model, seed).
Spectrum random_spectrum(Index dim, const RandomSpectrumModel& model,
                         std::uint64_t seed, const Limits& limits = {});

// Sorts the given energies ascending; origin tag explicit_list.
Spectrum explicit_spectrum(std::vector<Real> energies);

struct GapStats {
  Real min_gap = 0;
  Real mean_gap = 0;  // span / (D - 1)
  Real max_gap = 0;
  Real span = 0;
  Index dim = 0;
};

GapStats adjacent_gap_stats(const Spectrum& spectrum);

struct ResolutionTime {
  Real dimensionless = 0;              // 2 pi / min adjacent gap
  std::optional<Real> seconds;         // when a reference frequency is given
  std::optional<Real> universe_ratio;  // seconds / age of the universe
};

// Averaging window needed to resolve the two closest adjacent levels.
// Degenerate spectra (min_gap = 0) are rejected: the window is infinite.
ResolutionTime resolution_time(const GapStats& stats,
                               std::optional<Real> omega_ref_hz = {});

}  // namespace eqaudit
