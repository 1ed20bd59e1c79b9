#include "eqaudit/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace eqaudit {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  for (auto& word : state_) word = splitmix64(seed);
}

std::uint64_t RandomStream::uniform64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::unit_uniform() {
  return static_cast<double>(uniform64() >> 11) * 0x1.0p-53;
}

double RandomStream::standard_normal() {
  const double u1 = unit_uniform();
  const double u2 = unit_uniform();
  // 1 - u1 lies in (0, 1], so the log stays finite
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& matrix,
                                      const Limits& limits) {
  const Index dim = matrix.rows();
  if (dim == 0 || matrix.cols() != dim)
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square and non-empty");
  if (dim > limits.eigensolver_cap)
    throw NumericalError("hermitian_eigenvalues: dimension " + std::to_string(dim) +
                         " exceeds eigensolver cap " +
                         std::to_string(limits.eigensolver_cap));

  const double tol = 1e-12 * matrix.cwiseAbs().maxCoeff();
  for (Index row = 0; row < dim; ++row)
    for (Index col = row; col < dim; ++col)
      if (std::abs(matrix(row, col) - std::conj(matrix(col, row))) > tol)
        throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hermitian_eigenvalues: eigensolver did not converge");
  return solver.eigenvalues();
}

}  // namespace eqaudit
