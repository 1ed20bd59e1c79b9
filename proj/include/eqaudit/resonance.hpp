#pragma once

#include <utility>
#include <vector>

#include "eqaudit/spectra.hpp"
#include "eqaudit/types.hpp"

namespace eqaudit {

// One ordered level pair j != k with gap value E_j - E_k.
struct GapEntry {
  Real value;
  Index j;
  Index k;
};

// All D(D-1) ordered pairs, ascending by value with stable secondary order
// (j, k). Antisymmetric: every (g, j, k) has the partner (-g, k, j).
struct GapList {
  std::vector<GapEntry> entries;
  Index dim = 0;
};

GapList build_gap_list(const Spectrum& spectrum, const Limits& limits = {});

struct GapGroup {
  Real value;                                    // first (smallest) member gap
  std::vector<std::pair<Index, Index>> members;  // (j, k) level pairs
};

// Left-to-right sweep anchored at each group's first value: a new group
// starts when an entry exceeds the representative by more than tol. Groups
// partition the list; tol = 0 splits exact-degenerate classes only.
std::vector<GapGroup> group_gaps(const GapList& gaps, Real tol);

struct ResonanceCount {
  u128 total = 0;  // ordered gap pairs (p, q) with |g_p + g_q| < epsilon
  u128 kept = 0;   // pairs (p, reversed p): always D(D-1), always resonant
  u128 extra = 0;  // total - kept
};

// Counts quadruples (j,k,m,n), j != k, m != n, with |E_j-E_k+E_m-E_n| <
// epsilon, as ordered pairs of gap-list entries (self-pairing allowed).
// Each entry's window is a contiguous run of the sorted values, located by
// binary search with the same float predicate the brute-force oracle
// evaluates, so the two counts match exactly. O(P log P), P = D(D-1).
ResonanceCount count_near_resonant_quadruples(const GapList& gaps, Real epsilon,
                                              int threads = 1);

// O(D^4) four-index oracle, D <= 32.
u128 brute_force_quadruple_count(const Spectrum& spectrum, Real epsilon);

// Closed form for M modes with uniform cutoff c and rationally independent
// frequencies (per-mode balance j_i + m_i = k_i + n_i is then necessary and
// sufficient): total = S(c)^M - D^2 with S(c) = c(c+1)(2c+1)/3 + (c+1)^2 the
// per-mode sum of squared pair-sum multiplicities, and D = (c+1)^M; the D^2
// subtraction removes the j=k (hence m=n) quadruples.
ResonanceCount mode_resonance_count_analytic(Index modes, Index cutoff);

struct ResonantQuadruple {
  Eigen::VectorXi j, k, m, n;
  bool kept;  // j == n and k == m
};

// Occupation-vector quadruples with per-mode j_i + m_i = k_i + n_i, j != k,
// m != n, in lexicographic order of (j, k, m) (n is determined), stopping at
// `limit` entries.
std::vector<ResonantQuadruple> enumerate_exact_resonances(const ModeSystem& system,
                                                          Index limit,
                                                          const Limits& limits = {});

}  // namespace eqaudit
