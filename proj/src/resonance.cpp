#include "eqaudit/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "eqaudit/parallel.hpp"

namespace eqaudit {

GapList build_gap_list(const Spectrum& spectrum, const Limits& limits) {
  const Index dim = spectrum.dim();
  if (dim < 2) throw std::invalid_argument("gap list: need at least two levels");
  if (dim > limits.gap_list_cap)
    throw NumericalError("gap list: dimension " + std::to_string(dim) +
                         " exceeds cap " + std::to_string(limits.gap_list_cap));

  GapList gaps;
  gaps.dim = dim;
  gaps.entries.reserve(static_cast<std::size_t>(dim) * (dim - 1));
  for (Index j = 0; j < dim; ++j)
    for (Index k = 0; k < dim; ++k)
      if (j != k)
        gaps.entries.push_back({spectrum.energies(j) - spectrum.energies(k), j, k});
  std::sort(gaps.entries.begin(), gaps.entries.end(),
            [](const GapEntry& a, const GapEntry& b) {
              return std::tie(a.value, a.j, a.k) < std::tie(b.value, b.j, b.k);
            });
  return gaps;
}

std::vector<GapGroup> group_gaps(const GapList& gaps, Real tol) {
  if (tol < 0) throw std::invalid_argument("group gaps: tolerance must be >= 0");
  std::vector<GapGroup> groups;
  for (const auto& entry : gaps.entries) {
    if (groups.empty() || entry.value - groups.back().value > tol)
      groups.push_back({entry.value, {}});
    groups.back().members.emplace_back(entry.j, entry.k);
  }
  return groups;
}

ResonanceCount count_near_resonant_quadruples(const GapList& gaps, Real epsilon,
                                              int threads) {
  if (!(epsilon > 0)) throw std::invalid_argument("resonance count: epsilon must be > 0");

  const auto& entries = gaps.entries;
  const Index count = static_cast<Index>(entries.size());
  std::vector<Real> values(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) values[i] = entries[i].value;

  // Partners of entry p form a contiguous run of the sorted values. Both run
  // ends are located with the exact predicate |v_p + v| < epsilon evaluates,
  // so the result matches the brute-force oracle integer for integer.
  auto window_counts = [&](Index begin, Index end) {
    u128 subtotal = 0;
    for (Index p = begin; p < end; ++p) {
      const Real vp = values[static_cast<std::size_t>(p)];
      const auto first = std::partition_point(
          values.begin(), values.end(), [&](Real v) { return vp + v <= -epsilon; });
      const auto last = std::partition_point(
          first, values.end(), [&](Real v) { return vp + v < epsilon; });
      subtotal += static_cast<u128>(last - first);
    }
    return subtotal;
  };

  ResonanceCount result;
  for (const u128 partial : map_chunks<u128>(count, threads, window_counts))
    result.total = checked_add(result.total, partial);
  result.kept = static_cast<u128>(gaps.dim) * static_cast<u128>(gaps.dim - 1);
  result.extra = result.total - result.kept;
  return result;
}

u128 brute_force_quadruple_count(const Spectrum& spectrum, Real epsilon) {
  const Index dim = spectrum.dim();
  if (dim > 32)
    throw std::invalid_argument("brute-force quadruple count: D must be <= 32");
  if (!(epsilon > 0)) throw std::invalid_argument("resonance count: epsilon must be > 0");
  const auto& energy = spectrum.energies;
  u128 count = 0;
  for (Index j = 0; j < dim; ++j)
    for (Index k = 0; k < dim; ++k) {
      if (j == k) continue;
      const Real gap_jk = energy(j) - energy(k);
      for (Index m = 0; m < dim; ++m)
        for (Index n = 0; n < dim; ++n) {
          if (m == n) continue;
          if (std::abs(gap_jk + (energy(m) - energy(n))) < epsilon) ++count;
        }
    }
  return count;
}

ResonanceCount mode_resonance_count_analytic(Index modes, Index cutoff) {
  if (modes < 1) throw std::invalid_argument("analytic resonance count: M must be >= 1");
  if (cutoff < 0)
    throw std::invalid_argument("analytic resonance count: cutoff must be >= 0");
  const u128 c = static_cast<u128>(cutoff);
  // S(c) = sum over pair sums s of multiplicity^2, multiplicity c+1-|s-c|
  const u128 pair_sum_ways = c * (c + 1) * (2 * c + 1) / 3 + (c + 1) * (c + 1);
  const u128 dim = checked_pow(c + 1, static_cast<unsigned>(modes));
  ResonanceCount result;
  result.total = checked_pow(pair_sum_ways, static_cast<unsigned>(modes)) -
                 checked_mul(dim, dim);
  result.kept = checked_mul(dim, dim - 1);
  result.extra = result.total - result.kept;
  return result;
}

std::vector<ResonantQuadruple> enumerate_exact_resonances(const ModeSystem& system,
                                                          Index limit,
                                                          const Limits& limits) {
  system.validate();
  if (limit < 1) throw std::invalid_argument("enumerate resonances: limit must be >= 1");
  if (system.dimension() > static_cast<u128>(limits.dimension_cap))
    throw NumericalError("enumerate resonances: dimension exceeds cap " +
                         std::to_string(limits.dimension_cap));

  const Index modes = system.mode_count();
  auto advance = [&](Eigen::VectorXi& occ) {
    Index i = modes - 1;
    while (i >= 0 && occ(i) == system.cutoffs(i)) occ(i--) = 0;
    if (i < 0) return false;
    ++occ(i);
    return true;
  };

  std::vector<ResonantQuadruple> found;
  Eigen::VectorXi j = Eigen::VectorXi::Zero(modes);
  do {
    Eigen::VectorXi k = Eigen::VectorXi::Zero(modes);
    do {
      if (k == j) continue;
      Eigen::VectorXi m = Eigen::VectorXi::Zero(modes);
      do {
        Eigen::VectorXi n(modes);
        bool valid = true;
        for (Index i = 0; i < modes; ++i) {
          n(i) = j(i) + m(i) - k(i);
          if (n(i) < 0 || n(i) > system.cutoffs(i)) {
            valid = false;
            break;
          }
        }
        if (!valid || n == m) continue;
        found.push_back({j, k, m, n, n == j && m == k});
        if (static_cast<Index>(found.size()) == limit) return found;
      } while (advance(m));
    } while (advance(k));
  } while (advance(j));
  return found;
}

}  // namespace eqaudit
