#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eqaudit/dynamics.hpp"
#include "eqaudit/scan.hpp"
#include "eqaudit/types.hpp"

namespace eqaudit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // bad flags, keys, parameter values
inline constexpr int kExitNumerical = 2;  // caps, non-convergence, overflow
inline constexpr int kExitIo = 3;

struct ModeSystemSpec {
  std::vector<Real> frequencies;
  std::vector<int> cutoffs;  // explicit per-mode list; empty -> uniform cutoff
};
struct LadderSpec {
  Index dim = 0;
};
struct RandomSpec {
  Index dim = 0;
  std::string model = "uniform";  // uniform | goe
  Real span = 1.0;
};
using SystemSpec = std::variant<ModeSystemSpec, LadderSpec, RandomSpec>;

struct UniformStateSpec {};
struct GaussianStateSpec {
  std::optional<Real> center;  // default: spectrum midpoint
  std::optional<Real> width;
  Phases phases = Phases::zero;
  std::uint64_t seed = 0;
};
using StateSpec = std::variant<UniformStateSpec, GaussianStateSpec>;

struct HoppingSpec {
  Real amplitude = 1.0;
};
struct QuadratureSpec {
  Index mode = 0;
};
struct RandomObservableSpec {
  Real target_range = 1.0;
  std::uint64_t seed = 1;
};
using ObservableSpec = std::variant<HoppingSpec, QuadratureSpec, RandomObservableSpec>;

struct RunConfig {
  std::string command;

  std::optional<SystemSpec> system;
  std::optional<StateSpec> state;
  std::optional<ObservableSpec> observable;

  std::optional<int> cutoff;  // uniform mode cutoff; also the scan cutoff
  std::optional<Real> epsilon;
  std::optional<Real> gap_tol;
  std::optional<Real> window;  // single averaging window T
  std::optional<LogGrid> t_grid;
  std::optional<LogGrid> eps_grid;
  std::optional<std::pair<Index, Index>> m_range;
  Index trials = 5;
  std::uint64_t seed = 1;  // random spectra and scan trials
  std::optional<Real> omega_ref_hz;  // scan-gaps defaults to 1e9 when absent
  FrequencyModel frequency_model = FrequencyModel::independent;
  std::string method = "kernel";  // kernel | sampling
  Index n_steps = Index{1} << 16;
  int threads = 1;
  std::string out;            // empty: stdout (scans: timestamped file)
  std::string format = "csv"; // csv | json (scans only)
  Limits limits;
};

// Parses the command line and, when --config is given, the key-value file
// underneath it. Flags override file values; unknown flags or keys are hard
// errors (std::invalid_argument). Defaults: gap_tol = 1e-9 * span, and
// epsilon = 2 pi / T when T is given and epsilon is absent.
RunConfig parse_config(const std::vector<std::string>& args);

// Runs the configured command, writing the report to --out (or, for scans
// without --out, to <scan_name>_<timestamp>.<format>) and otherwise to
// fallback_out. Notices go to `log`.
void dispatch(const RunConfig& config, std::ostream& fallback_out, std::ostream& log);

// parse + dispatch + error-to-exit-code mapping. Errors print one line
// `error: <code>: <detail>` to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eqaudit::cli
