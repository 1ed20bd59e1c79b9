#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace eqaudit {

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

// 128-bit counters for quadruple counts: the closed-form totals grow like
// 6^M and clear 2^64 near M = 25, well inside the supported range.
using u128 = unsigned __int128;

std::string to_string(u128 value);

// Counter overflow, size caps, non-convergence, degenerate spectra. Maps to
// exit code 2 in the CLI; std::invalid_argument maps to exit code 1.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checked u128 arithmetic: counts beyond 2^128 are a hard error, not a wrap.
u128 checked_add(u128 a, u128 b);
u128 checked_mul(u128 a, u128 b);
u128 checked_pow(u128 base, unsigned exponent);

// Size caps shared across modules, all configurable from the CLI.
struct Limits {
  Index dimension_cap = 4096;    // levels in an enumerated mode spectrum
  Index eigensolver_cap = 512;   // dense Hermitian eigensolver
  Index gap_list_cap = 2048;     // spectrum dimension for O(D^2) gap lists
  double kernel_work_cap = 2e9;  // kernel evaluations in the windowed double sum
};

inline constexpr Real kAgeOfUniverseSeconds = 4.35e17;

}  // namespace eqaudit
