#include "eqaudit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "eqaudit/numerics.hpp"
#include "eqaudit/parallel.hpp"
#include "eqaudit/resonance.hpp"

namespace eqaudit {

namespace {

void check_dimensions(const QuantumState& state, const Observable& observable,
                      const Spectrum* spectrum) {
  if (observable.dim() != state.dim())
    throw std::invalid_argument("dimension mismatch between state and observable");
  if (spectrum && spectrum->dim() != state.dim())
    throw std::invalid_argument("dimension mismatch between state and spectrum");
}

Real resolve_gap_tol(std::optional<Real> gap_tol, const Spectrum& spectrum) {
  if (!gap_tol) return 1e-9 * spectrum.span();
  if (*gap_tol < 0) throw std::invalid_argument("gap tolerance must be >= 0");
  return *gap_tol;
}

// Gap groups reduced to (value, F) with F(g) = sum over members (j, k) of
// rho_kj A_jk, so that D(t) = sum_g F(g) e^{igt}. total_groups keeps the
// pre-reduction group count for the kernel work-cap check; groups whose
// amplitude is exactly zero contribute nothing to any sum and are dropped.
struct GroupedAmplitudes {
  std::vector<Real> gap_values;
  std::vector<Complex> amplitudes;
  Index total_groups = 0;
};

GroupedAmplitudes group_amplitudes(const QuantumState& state,
                                   const Observable& observable,
                                   const Spectrum& spectrum, Real tol,
                                   const Limits& limits) {
  const GapList gaps = build_gap_list(spectrum, limits);
  const auto groups = group_gaps(gaps, tol);

  GroupedAmplitudes reduced;
  reduced.total_groups = static_cast<Index>(groups.size());
  for (const auto& group : groups) {
    Complex amplitude = 0;
    for (const auto& [j, k] : group.members)
      amplitude += state.amplitudes(k) * std::conj(state.amplitudes(j)) *
                   observable.matrix(j, k);
    if (amplitude != Complex{0.0, 0.0}) {
      reduced.gap_values.push_back(group.value);
      reduced.amplitudes.push_back(amplitude);
    }
  }
  return reduced;
}

Real kernel_window_variance(const GroupedAmplitudes& grouped, Real T,
                            const Limits& limits, int threads) {
  const double work = static_cast<double>(grouped.total_groups) *
                      static_cast<double>(grouped.total_groups);
  if (work > limits.kernel_work_cap)
    throw NumericalError("finite window variance: " + std::to_string(work) +
                         " kernel evaluations exceed the work cap " +
                         std::to_string(limits.kernel_work_cap) +
                         "; use the sampling method");

  const Index count = static_cast<Index>(grouped.gap_values.size());
  auto row_sums = [&](Index begin, Index end) {
    Complex partial = 0;
    for (Index a = begin; a < end; ++a) {
      Complex inner = 0;
      for (Index b = 0; b < count; ++b)
        inner += grouped.amplitudes[static_cast<std::size_t>(b)] *
                 window_kernel(grouped.gap_values[static_cast<std::size_t>(a)] +
                                   grouped.gap_values[static_cast<std::size_t>(b)],
                               T);
      partial += grouped.amplitudes[static_cast<std::size_t>(a)] * inner;
    }
    return partial;
  };

  Complex total = 0;
  for (const Complex partial : map_chunks<Complex>(count, threads, row_sums))
    total += partial;
  return std::max(0.0, total.real());
}

// D(t) as the literal sum over m != n: the phased vector against the
// off-diagonal part of A. Exactly zero for diagonal observables.
Real deviation_against(const Eigen::MatrixXcd& off_diagonal, const QuantumState& state,
                       const Spectrum& spectrum, Real t) {
  const Index dim = state.dim();
  Eigen::VectorXcd phased(dim);
  for (Index n = 0; n < dim; ++n)
    phased(n) = state.amplitudes(n) * std::polar(1.0, -spectrum.energies(n) * t);
  const Complex deviation = phased.dot(off_diagonal * phased);
  if (std::abs(deviation.imag()) > 1e-10 * (1.0 + std::abs(deviation.real())))
    throw NumericalError(
        "expectation deviation: imaginary residue above tolerance; observable is "
        "not Hermitian");
  return deviation.real();
}

Eigen::MatrixXcd off_diagonal_part(const Eigen::MatrixXcd& matrix) {
  Eigen::MatrixXcd off = matrix;
  off.diagonal().setZero();
  return off;
}

Real sampled_window_variance(const QuantumState& state, const Observable& observable,
                             const Spectrum& spectrum, Real T, Index n_steps,
                             int threads) {
  if (n_steps < 2 || n_steps % 2 != 0)
    throw std::invalid_argument("sampling method: n_steps must be even and >= 2");
  const Real h = T / static_cast<Real>(n_steps);
  const Eigen::MatrixXcd off_diagonal = off_diagonal_part(observable.matrix);

  auto squared_deviation = [&](Real t) {
    const Real deviation = deviation_against(off_diagonal, state, spectrum, t);
    return deviation * deviation;
  };

  // Composite Simpson: endpoints weight 1, odd interior 4, even interior 2.
  auto interior = [&](Index begin, Index end) {
    Real partial = 0;
    for (Index i = begin; i < end; ++i) {
      const Real weight = (i % 2 == 1) ? 4.0 : 2.0;
      partial += weight * squared_deviation(static_cast<Real>(i) * h);
    }
    return partial;
  };

  Real sum = squared_deviation(0.0) + squared_deviation(T);
  std::vector<Real> partials = map_chunks<Real>(n_steps - 1, threads,
                                                [&](Index begin, Index end) {
                                                  return interior(begin + 1, end + 1);
                                                });
  for (const Real partial : partials) sum += partial;
  return (h * sum / 3.0) / T;
}

}  // namespace

QuantumState make_state(Eigen::VectorXcd amplitudes) {
  if (amplitudes.size() < 1) throw std::invalid_argument("state: empty amplitude vector");
  const Real norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw std::invalid_argument("state: amplitudes are not normalized");
  return {std::move(amplitudes)};
}

QuantumState uniform_state(Index dim) {
  if (dim < 1) throw std::invalid_argument("uniform state: dim must be >= 1");
  // sqrt(1.0/D) and 1.0/sqrt(D) round differently; tests pin the former
  const Real amplitude = std::sqrt(1.0 / static_cast<Real>(dim));
  return {Eigen::VectorXcd::Constant(dim, Complex(amplitude, 0.0))};
}

QuantumState gaussian_state(const Spectrum& spectrum, Real e_center, Real width,
                            Phases phases, std::uint64_t seed) {
  if (!(width > 0) || !std::isfinite(width))
    throw std::invalid_argument("gaussian state: width must be positive and finite");
  const Index dim = spectrum.dim();
  if (dim < 1) throw std::invalid_argument("gaussian state: empty spectrum");

  // Work with log-weights shifted by their maximum so the peak level always
  // keeps weight 1 and broad states cannot underflow to zero.
  Eigen::VectorXd log_weight(dim);
  for (Index n = 0; n < dim; ++n) {
    const Real detune = (spectrum.energies(n) - e_center) / (2.0 * width);
    log_weight(n) = -detune * detune;
  }
  const Real peak = log_weight.maxCoeff();
  if (!std::isfinite(peak))
    throw NumericalError("gaussian state: state has no support");

  Eigen::VectorXd magnitude(dim);
  for (Index n = 0; n < dim; ++n) magnitude(n) = std::exp(log_weight(n) - peak);
  magnitude /= magnitude.norm();

  Eigen::VectorXcd amplitudes(dim);
  if (phases == Phases::zero) {
    for (Index n = 0; n < dim; ++n) amplitudes(n) = Complex(magnitude(n), 0.0);
  } else {
    RandomStream rng(seed);
    for (Index n = 0; n < dim; ++n) {
      const Real angle = 2.0 * std::numbers::pi * rng.unit_uniform();
      amplitudes(n) = std::polar(magnitude(n), angle);
    }
  }
  return {std::move(amplitudes)};
}

StatePurity state_purity(const QuantumState& state) {
  Real purity = 0;
  for (Index n = 0; n < state.dim(); ++n) {
    const Real population = std::norm(state.amplitudes(n));
    purity += population * population;
  }
  return {purity, 1.0 / purity};
}

Observable make_observable(Eigen::MatrixXcd matrix, const Limits& limits) {
  const Eigen::VectorXd eigenvalues = hermitian_eigenvalues(matrix, limits);
  const Real range = eigenvalues(eigenvalues.size() - 1) - eigenvalues(0);
  return {std::move(matrix), range};
}

Observable hopping_observable(Index dim, Real amplitude, const Limits& limits) {
  if (dim < 2) throw std::invalid_argument("hopping observable: dim must be >= 2");
  Eigen::MatrixXcd matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (Index n = 0; n + 1 < dim; ++n) {
    matrix(n, n + 1) = amplitude;
    matrix(n + 1, n) = amplitude;
  }
  if (dim <= limits.eigensolver_cap) return make_observable(std::move(matrix), limits);
  // beyond the dense cap the path-graph form 2 a cos(k pi / (D+1)) is exact
  const Real range =
      4.0 * std::abs(amplitude) * std::cos(std::numbers::pi / static_cast<Real>(dim + 1));
  return {std::move(matrix), range};
}

Observable quadrature_observable(const Spectrum& spectrum, Index mode_index,
                                 const Limits& limits) {
  if (!spectrum.has_labels())
    throw std::invalid_argument("quadrature observable: spectrum lacks occupation labels");
  const Index dim = spectrum.dim();
  const Index modes = spectrum.labels.front().size();
  if (mode_index < 0 || mode_index >= modes)
    throw std::invalid_argument("quadrature observable: mode index out of range");

  std::unordered_map<std::string, Index> level_of;
  level_of.reserve(static_cast<std::size_t>(dim));
  auto key_of = [](const Eigen::VectorXi& label) {
    return std::string(reinterpret_cast<const char*>(label.data()),
                       static_cast<std::size_t>(label.size()) * sizeof(int));
  };
  for (Index level = 0; level < dim; ++level)
    level_of.emplace(key_of(spectrum.labels[static_cast<std::size_t>(level)]), level);

  Eigen::MatrixXcd matrix = Eigen::MatrixXcd::Zero(dim, dim);
  int block_size = 1;
  for (Index column = 0; column < dim; ++column) {
    Eigen::VectorXi label = spectrum.labels[static_cast<std::size_t>(column)];
    const int occ = label(mode_index);
    block_size = std::max(block_size, occ + 1);
    if (occ > 0) {
      label(mode_index) = occ - 1;
      if (auto hit = level_of.find(key_of(label)); hit != level_of.end())
        matrix(hit->second, column) = std::sqrt(occ / 2.0);
      label(mode_index) = occ;
    }
    label(mode_index) = occ + 1;
    if (auto hit = level_of.find(key_of(label)); hit != level_of.end())
      matrix(hit->second, column) = std::sqrt((occ + 1) / 2.0);
  }

  // The operator acts on one mode only, so its range equals the range of the
  // (c_i + 1)-dimensional single-mode block.
  Real range = 0;
  if (block_size > 1) {
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(block_size, block_size);
    for (int occ = 0; occ + 1 < block_size; ++occ) {
      block(occ, occ + 1) = std::sqrt((occ + 1) / 2.0);
      block(occ + 1, occ) = block(occ, occ + 1);
    }
    const Eigen::VectorXd eigenvalues = hermitian_eigenvalues(block, limits);
    range = eigenvalues(block_size - 1) - eigenvalues(0);
  }
  return {std::move(matrix), range};
}

Observable random_hermitian_observable(Index dim, std::uint64_t seed,
                                       Real target_range, const Limits& limits) {
  if (dim < 2) throw std::invalid_argument("random observable: dim must be >= 2");
  if (!(target_range > 0))
    throw std::invalid_argument("random observable: target range must be > 0");
  if (dim > limits.eigensolver_cap)
    throw NumericalError("random observable: dimension " + std::to_string(dim) +
                         " exceeds eigensolver cap " +
                         std::to_string(limits.eigensolver_cap));

  RandomStream rng(seed);
  const Real off_diag_scale = std::sqrt(0.5);
  Eigen::MatrixXcd matrix(dim, dim);
  for (Index row = 0; row < dim; ++row)
    for (Index col = row; col < dim; ++col) {
      if (row == col) {
        matrix(row, col) = Complex(rng.standard_normal(), 0.0);
      } else {
        const Real re = rng.standard_normal();
        const Real im = rng.standard_normal();
        matrix(row, col) = Complex(re, im) * off_diag_scale;
        matrix(col, row) = std::conj(matrix(row, col));
      }
    }

  const Eigen::VectorXd eigenvalues = hermitian_eigenvalues(matrix, limits);
  const Real spread = eigenvalues(dim - 1) - eigenvalues(0);
  if (!(spread > 0))
    throw NumericalError("random observable: drawn matrix has zero spectral range");
  matrix *= target_range / spread;
  return {std::move(matrix), target_range};
}

Real expectation_deviation(const QuantumState& state, const Observable& observable,
                           const Spectrum& spectrum, Real t) {
  check_dimensions(state, observable, &spectrum);
  return deviation_against(off_diagonal_part(observable.matrix), state, spectrum, t);
}

Complex window_kernel(Real omega, Real T) {
  if (!(T > 0)) throw std::invalid_argument("window kernel: T must be > 0");
  const Real x = omega * T;
  if (std::abs(x) < 1e-8) return {1.0 - x * x / 6.0, 0.5 * x};
  return (std::polar(1.0, x) - Complex{1.0, 0.0}) / Complex{0.0, x};
}

Real finite_window_variance(const QuantumState& state, const Observable& observable,
                            const Spectrum& spectrum, Real T,
                            const VarianceMethod& method, std::optional<Real> gap_tol,
                            const Limits& limits, int threads) {
  check_dimensions(state, observable, &spectrum);
  if (!(T > 0)) throw std::invalid_argument("finite window variance: T must be > 0");
  if (const auto* sampling = std::get_if<SamplingMethod>(&method))
    return sampled_window_variance(state, observable, spectrum, T, sampling->n_steps,
                                   threads);
  const Real tol = resolve_gap_tol(gap_tol, spectrum);
  const auto grouped = group_amplitudes(state, observable, spectrum, tol, limits);
  return kernel_window_variance(grouped, T, limits, threads);
}

Real infinite_time_variance(const QuantumState& state, const Observable& observable,
                            const Spectrum& spectrum, std::optional<Real> gap_tol,
                            const Limits& limits) {
  check_dimensions(state, observable, &spectrum);
  const Real tol = resolve_gap_tol(gap_tol, spectrum);
  const auto grouped = group_amplitudes(state, observable, spectrum, tol, limits);
  Real sum = 0;
  for (const Complex& amplitude : grouped.amplitudes) sum += std::norm(amplitude);
  return sum;
}

Real truncated_variance(const QuantumState& state, const Observable& observable) {
  check_dimensions(state, observable, nullptr);
  const Index dim = state.dim();
  Real sum = 0;
  for (Index m = 0; m < dim; ++m)
    for (Index n = 0; n < dim; ++n) {
      if (m == n) continue;
      const Real rho_mn_sq =
          std::norm(state.amplitudes(m)) * std::norm(state.amplitudes(n));
      sum += rho_mn_sq * std::norm(observable.matrix(n, m));
    }
  return sum;
}

Real reimann_bound(const QuantumState& state, const Observable& observable) {
  check_dimensions(state, observable, nullptr);
  return observable.range * observable.range * state_purity(state).purity;
}

VarianceReport bound_report(const QuantumState& state, const Observable& observable,
                            const Spectrum& spectrum, const std::vector<Real>& T_grid,
                            std::optional<Real> gap_tol, const VarianceMethod& method,
                            const Limits& limits, int threads) {
  check_dimensions(state, observable, &spectrum);
  if (T_grid.empty()) throw std::invalid_argument("bound report: empty T grid");
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    if (!(T_grid[i] > 0))
      throw std::invalid_argument("bound report: T grid must be positive");
    if (i > 0 && T_grid[i] < T_grid[i - 1])
      throw std::invalid_argument("bound report: T grid must be ascending");
  }

  const Real tol = resolve_gap_tol(gap_tol, spectrum);
  const auto grouped = group_amplitudes(state, observable, spectrum, tol, limits);

  VarianceReport report;
  report.gap_groups = grouped.total_groups;
  report.sigma2_T.reserve(T_grid.size());
  const bool use_kernel = std::holds_alternative<KernelMethod>(method);
  for (const Real T : T_grid) {
    const Real value =
        use_kernel ? kernel_window_variance(grouped, T, limits, threads)
                   : finite_window_variance(state, observable, spectrum, T, method,
                                            gap_tol, limits, threads);
    report.sigma2_T.emplace_back(T, value);
  }

  Real inf_sum = 0;
  for (const Complex& amplitude : grouped.amplitudes) inf_sum += std::norm(amplitude);
  report.sigma2_inf = inf_sum;
  report.truncated = truncated_variance(state, observable);
  report.bound = reimann_bound(state, observable);
  const Real d0 = expectation_deviation(state, observable, spectrum, 0.0);
  report.d0_squared = d0 * d0;
  report.ratio_inf_over_bound = report.sigma2_inf / report.bound;
  report.ratio_inf_over_truncated = report.sigma2_inf / report.truncated;
  return report;
}

}  // namespace eqaudit
