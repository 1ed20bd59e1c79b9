#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "eqaudit/spectra.hpp"
#include "eqaudit/types.hpp"

namespace eqaudit {

// Pure state in the energy eigenbasis of the associated spectrum. The
// implied density matrix is rho_mn = c_m conj(c_n); only pure states are
// supported, so rho never needs to be materialized.
struct QuantumState {
  Eigen::VectorXcd amplitudes;

  Index dim() const { return amplitudes.size(); }
};

// Validates normalization to 1e-12.
QuantumState make_state(Eigen::VectorXcd amplitudes);

// c_n = sqrt(1/D) for all n, zero phases.
QuantumState uniform_state(Index dim);

enum class Phases { zero, random };

// |c_n| proportional to exp(-(E_n - e_center)^2 / (4 width^2)), normalized.
// Random phases are iid uniform [0, 2 pi) drawn in level order from the
// seeded stream.
QuantumState gaussian_state(const Spectrum& spectrum, Real e_center, Real width,
                            Phases phases = Phases::zero, std::uint64_t seed = 0);

struct StatePurity {
  Real purity;         // sum_n |c_n|^4
  Real effective_dim;  // 1 / purity
};

StatePurity state_purity(const QuantumState& state);

// Hermitian observable in the energy eigenbasis with its working range
// Delta_A = lambda_max - lambda_min cached at construction.
struct Observable {
  Eigen::MatrixXcd matrix;
  Real range = 0;

  Index dim() const { return matrix.rows(); }
};

// Validates Hermiticity (1e-12 times the largest entry) and computes the
// range with the dense eigensolver.
Observable make_observable(Eigen::MatrixXcd matrix, const Limits& limits = {});

// A_{n,n+1} = A_{n+1,n} = amplitude, everything else zero. The range is the
// path-graph spread 4 |amplitude| cos(pi / (dim + 1)); it is computed by the
// eigensolver up to the dense cap and by the closed form beyond it.
Observable hopping_observable(Index dim, Real amplitude, const Limits& limits = {});

// (a_i + a_i^dag) / sqrt(2) on the truncated occupation space, rows and
// columns ordered as the spectrum's labels. Requires a labeled spectrum.
Observable quadrature_observable(const Spectrum& spectrum, Index mode_index,
                                 const Limits& limits = {});

// Gaussian Hermitian matrix rescaled so the range equals target_range.
Observable random_hermitian_observable(Index dim, std::uint64_t seed,
                                       Real target_range, const Limits& limits = {});

// D(t) = Tr{rho(t) A} - Tr{rho_eq A}: the instantaneous deviation of <A>
// from the diagonal-ensemble value. Real for Hermitian inputs; an imaginary
// residue above 1e-10 (1 + |Re|) is rejected as a non-Hermitian input.
Real expectation_deviation(const QuantumState& state, const Observable& observable,
                           const Spectrum& spectrum, Real t);

// kappa_T(Omega) = (1/T) int_0^T e^{i Omega t} dt = (e^{i Omega T} - 1) /
// (i Omega T), with the series 1 + i x/2 - x^2/6 below |Omega T| = 1e-8 to
// dodge the cancellation.
Complex window_kernel(Real omega, Real T);

struct KernelMethod {};  // gap groups + window kernel, exact up to grouping
struct SamplingMethod {
  Index n_steps = Index{1} << 16;  // composite Simpson panels, even
};
using VarianceMethod = std::variant<KernelMethod, SamplingMethod>;

// Time average of D(t)^2 over [0, T].
//
// Kernel method: gaps are grouped at gap_tol and each group carries the
// amplitude F(g) = sum of rho_mn A_nm over its (n, m) pairs, so that
// D(t) = sum_g F(g) e^{igt} and the average is
// Re sum_{g,g'} F(g) F(g') kappa_T(g + g'). The |G|^2 kernel evaluations
// must fit the work cap; the error suggests the sampling method otherwise.
//
// Sampling method: composite Simpson average of D(t)^2 with n_steps panels,
// evaluating D(t) directly. Serves as the independent oracle for the kernel
// route.
//
// gap_tol: nullopt picks the default 1e-9 * span.
Real finite_window_variance(const QuantumState& state, const Observable& observable,
                            const Spectrum& spectrum, Real T,
                            const VarianceMethod& method = KernelMethod{},
                            std::optional<Real> gap_tol = {},
                            const Limits& limits = {}, int threads = 1);

// Infinite-window limit: sum over gap groups of |F(g)|^2. With gap_tol = 0
// and all gaps distinct this reduces to the truncated sum.
Real infinite_time_variance(const QuantumState& state, const Observable& observable,
                            const Spectrum& spectrum,
                            std::optional<Real> gap_tol = {},
                            const Limits& limits = {});

// sum_{m != n} |rho_mn|^2 |A_nm|^2: the value the j=n, k=m truncation of the
// quadruple sum assigns to the variance.
Real truncated_variance(const QuantumState& state, const Observable& observable);

// Delta_A^2 sum_n rho_nn^2.
Real reimann_bound(const QuantumState& state, const Observable& observable);

struct VarianceReport {
  std::vector<std::pair<Real, Real>> sigma2_T;  // (T, sigma^2(T))
  Real sigma2_inf = 0;
  Real truncated = 0;
  Real bound = 0;
  Real d0_squared = 0;
  Real ratio_inf_over_bound = 0;
  Real ratio_inf_over_truncated = 0;
  Index gap_groups = 0;  // group count at the tolerance used
};

// T_grid must be non-empty, positive, ascending.
VarianceReport bound_report(const QuantumState& state, const Observable& observable,
                            const Spectrum& spectrum, const std::vector<Real>& T_grid,
                            std::optional<Real> gap_tol = {},
                            const VarianceMethod& method = KernelMethod{},
                            const Limits& limits = {}, int threads = 1);

}  // namespace eqaudit
