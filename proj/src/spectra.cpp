#include "eqaudit/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "eqaudit/numerics.hpp"

namespace eqaudit {

u128 ModeSystem::dimension() const {
  u128 dim = 1;
  for (Index i = 0; i < cutoffs.size(); ++i)
    dim = checked_mul(dim, static_cast<u128>(cutoffs(i)) + 1);
  return dim;
}

void ModeSystem::validate() const {
  if (frequencies.size() == 0)
    throw std::invalid_argument("mode system: empty frequency list");
  if (frequencies.size() != cutoffs.size())
    throw std::invalid_argument("mode system: frequencies and cutoffs differ in length");
  for (Index i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies(i) > 0.0) || !std::isfinite(frequencies(i)))
      throw std::invalid_argument("mode system: frequencies must be positive and finite");
    if (cutoffs(i) < 0)
      throw std::invalid_argument("mode system: cutoffs must be non-negative");
  }
}

ModeSystem uniform_cutoff_system(const Eigen::VectorXd& frequencies, int cutoff) {
  ModeSystem system{frequencies, Eigen::VectorXi::Constant(frequencies.size(), cutoff)};
  system.validate();
  return system;
}

ModeSystem ladder_system(Index dim) {
  if (dim < 1) throw std::invalid_argument("ladder system: dimension must be >= 1");
  ModeSystem system;
  system.frequencies = Eigen::VectorXd::Ones(1);
  system.cutoffs = Eigen::VectorXi::Constant(1, static_cast<int>(dim) - 1);
  return system;
}

Eigen::VectorXd square_free_frequencies(Index count) {
  if (count < 1) throw std::invalid_argument("square-free frequencies: count must be >= 1");
  Eigen::VectorXd frequencies(count);
  Index found = 0;
  for (long n = 1; found < count; ++n) {
    bool square_free = true;
    for (long p = 2; p * p <= n; ++p)
      if (n % (p * p) == 0) {
        square_free = false;
        break;
      }
    if (square_free) frequencies(found++) = std::sqrt(static_cast<Real>(n));
  }
  return frequencies;
}

Spectrum build_mode_spectrum(const ModeSystem& system, const Limits& limits) {
  system.validate();
  const u128 dim_wide = system.dimension();
  if (dim_wide > static_cast<u128>(limits.dimension_cap))
    throw NumericalError("mode spectrum: dimension " + to_string(dim_wide) +
                         " exceeds cap " + std::to_string(limits.dimension_cap));
  const Index dim = static_cast<Index>(dim_wide);
  const Index modes = system.mode_count();

  // Mixed-radix enumeration with the last mode fastest gives the occupation
  // vectors in lexicographic order; stable sort by energy then preserves that
  // order within degenerate levels.
  std::vector<Eigen::VectorXi> labels;
  labels.reserve(static_cast<std::size_t>(dim));
  std::vector<Real> energies(static_cast<std::size_t>(dim));
  Eigen::VectorXi occ = Eigen::VectorXi::Zero(modes);
  for (Index level = 0; level < dim; ++level) {
    Real energy = 0.0;
    for (Index i = 0; i < modes; ++i) energy += occ(i) * system.frequencies(i);
    energies[static_cast<std::size_t>(level)] = energy;
    labels.push_back(occ);
    Index i = modes - 1;
    while (i >= 0 && occ(i) == system.cutoffs(i)) occ(i--) = 0;
    if (i >= 0) ++occ(i);
  }

  std::vector<Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return energies[static_cast<std::size_t>(a)] < energies[static_cast<std::size_t>(b)];
  });

  Spectrum spectrum;
  spectrum.origin = SpectrumOrigin::mode_system;
  spectrum.energies.resize(dim);
  spectrum.labels.reserve(static_cast<std::size_t>(dim));
  for (Index level = 0; level < dim; ++level) {
    const Index source = order[static_cast<std::size_t>(level)];
    spectrum.energies(level) = energies[static_cast<std::size_t>(source)];
    spectrum.labels.push_back(labels[static_cast<std::size_t>(source)]);
  }
  return spectrum;
}

Spectrum random_spectrum(Index dim, const RandomSpectrumModel& model,
                         std::uint64_t seed, const Limits& limits) {
  if (dim < 2) throw std::invalid_argument("random spectrum: dim must be >= 2");
  Spectrum spectrum;
  RandomStream rng(seed);

  if (const auto* uniform = std::get_if<UniformModel>(&model)) {
    if (!(uniform->span > 0))
      throw std::invalid_argument("random spectrum: span must be > 0");
    spectrum.energies.resize(dim);
    for (Index n = 0; n < dim; ++n)
      spectrum.energies(n) = uniform->span * rng.unit_uniform();
    std::sort(spectrum.energies.begin(), spectrum.energies.end());
    spectrum.origin = SpectrumOrigin::uniform_random;
    return spectrum;
  }

  if (dim > limits.eigensolver_cap)
    throw NumericalError("goe spectrum: dimension " + std::to_string(dim) +
                         " exceeds eigensolver cap " +
                         std::to_string(limits.eigensolver_cap));
  Eigen::MatrixXcd h(dim, dim);
  const Real diag_scale = std::sqrt(2.0);
  for (Index row = 0; row < dim; ++row)
    for (Index col = row; col < dim; ++col) {
      const Real draw = rng.standard_normal();
      const Real entry = (row == col) ? diag_scale * draw : draw;
      h(row, col) = entry;
      h(col, row) = entry;
    }
  spectrum.energies = hermitian_eigenvalues(h, limits);
  spectrum.origin = SpectrumOrigin::goe;
  return spectrum;
}

Spectrum explicit_spectrum(std::vector<Real> energies) {
  if (energies.empty()) throw std::invalid_argument("explicit spectrum: no energies");
  for (const Real energy : energies)
    if (!std::isfinite(energy))
      throw std::invalid_argument("explicit spectrum: energies must be finite");
  std::sort(energies.begin(), energies.end());
  Spectrum spectrum;
  spectrum.energies = Eigen::Map<const Eigen::VectorXd>(energies.data(),
                                                        static_cast<Index>(energies.size()));
  spectrum.origin = SpectrumOrigin::explicit_list;
  return spectrum;
}

GapStats adjacent_gap_stats(const Spectrum& spectrum) {
  const Index dim = spectrum.dim();
  if (dim < 2) throw std::invalid_argument("gap stats: need at least two levels");
  GapStats stats;
  stats.dim = dim;
  stats.span = spectrum.span();
  stats.mean_gap = stats.span / static_cast<Real>(dim - 1);
  stats.min_gap = std::numeric_limits<Real>::infinity();
  stats.max_gap = 0.0;
  for (Index n = 0; n + 1 < dim; ++n) {
    const Real gap = spectrum.energies(n + 1) - spectrum.energies(n);
    stats.min_gap = std::min(stats.min_gap, gap);
    stats.max_gap = std::max(stats.max_gap, gap);
  }
  return stats;
}

ResolutionTime resolution_time(const GapStats& stats,
                               std::optional<Real> omega_ref_hz) {
  if (!(stats.min_gap > 0.0))
    throw NumericalError("degenerate spectrum: resolution time infinite");
  ResolutionTime result;
  result.dimensionless = 2.0 * std::numbers::pi / stats.min_gap;
  if (omega_ref_hz) {
    if (!(*omega_ref_hz > 0.0))
      throw std::invalid_argument("resolution time: reference frequency must be > 0");
    result.seconds = result.dimensionless / *omega_ref_hz;
    result.universe_ratio = *result.seconds / kAgeOfUniverseSeconds;
  }
  return result;
}

}  // namespace eqaudit
