#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>

#include "eqaudit/types.hpp"

namespace eqaudit {

// Deterministic xoshiro256** stream seeded through SplitMix64. Integer and
// unit-uniform draws are bit-identical everywhere; normal draws go through
// libm (log/cos) and are reproducible per platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t uniform64();

  // [0, 1) with a 53-bit mantissa.
  double unit_uniform();

  // Box-Muller: each draw consumes one uniform pair and returns the cosine
  // branch, so the stream position does not depend on caller history.
  double standard_normal();

 private:
  std::array<std::uint64_t, 4> state_;
};

// Eigenvalues of a Hermitian matrix, ascending. Rejects matrices beyond the
// eigensolver cap and inputs that deviate from Hermiticity by more than
// 1e-12 times the largest entry magnitude.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& matrix,
                                      const Limits& limits = {});

}  // namespace eqaudit
