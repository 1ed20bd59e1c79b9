#include "eqaudit/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "eqaudit/io.hpp"

namespace eqaudit::cli {

namespace {

[[noreturn]] void usage_error(const std::string& message) {
  throw std::invalid_argument(message);
}

struct FlagSpec {
  const char* flag;         // command-line spelling
  const char* key;          // canonical config key receiving the value
  bool takes_value;
  const char* set_key;      // secondary key set to a fixed value, or nullptr
  const char* set_value;
  const char* system_kind;  // modes | ladder | random | nullptr
};

constexpr FlagSpec kFlags[] = {
    {"--modes", "system.modes", true, nullptr, nullptr, "modes"},
    {"--cutoffs", "system.cutoffs", true, nullptr, nullptr, "modes"},
    {"--cutoff", "cutoff", true, nullptr, nullptr, nullptr},
    {"--ladder", "system.ladder", true, nullptr, nullptr, "ladder"},
    {"--random", "system.random.dim", true, nullptr, nullptr, "random"},
    {"--model", "system.random.model", true, nullptr, nullptr, nullptr},
    {"--span", "system.random.span", true, nullptr, nullptr, nullptr},
    {"--seed", "seed", true, nullptr, nullptr, nullptr},
    {"--uniform", nullptr, false, "state.kind", "uniform", nullptr},
    {"--gaussian", nullptr, false, "state.kind", "gaussian", nullptr},
    {"--center", "state.center", true, nullptr, nullptr, nullptr},
    {"--width", "state.width", true, nullptr, nullptr, nullptr},
    {"--phases", "state.phases", true, nullptr, nullptr, nullptr},
    {"--state-seed", "state.seed", true, nullptr, nullptr, nullptr},
    {"--hopping", "observable.amplitude", true, "observable.kind", "hopping", nullptr},
    {"--quadrature", "observable.mode", true, "observable.kind", "quadrature", nullptr},
    {"--random-obs", "observable.range", true, "observable.kind", "random", nullptr},
    {"--obs-seed", "observable.seed", true, nullptr, nullptr, nullptr},
    {"--epsilon", "epsilon", true, nullptr, nullptr, nullptr},
    {"--gap-tol", "gap_tol", true, nullptr, nullptr, nullptr},
    {"--T", "T", true, nullptr, nullptr, nullptr},
    {"--T-grid", "T_grid", true, nullptr, nullptr, nullptr},
    {"--eps-grid", "eps_grid", true, nullptr, nullptr, nullptr},
    {"--M", "M", true, nullptr, nullptr, nullptr},
    {"--trials", "trials", true, nullptr, nullptr, nullptr},
    {"--omega-ref", "omega_ref_hz", true, nullptr, nullptr, nullptr},
    {"--commensurate", nullptr, false, "frequency_model", "commensurate", nullptr},
    {"--method", "method", true, nullptr, nullptr, nullptr},
    {"--n-steps", "n_steps", true, nullptr, nullptr, nullptr},
    {"--threads", "threads", true, nullptr, nullptr, nullptr},
    {"--out", "out", true, nullptr, nullptr, nullptr},
    {"--format", "format", true, nullptr, nullptr, nullptr},
    {"--dim-cap", "caps.dimension", true, nullptr, nullptr, nullptr},
    {"--eig-cap", "caps.eigensolver", true, nullptr, nullptr, nullptr},
    {"--gap-cap", "caps.gap_list", true, nullptr, nullptr, nullptr},
    {"--work-cap", "caps.work", true, nullptr, nullptr, nullptr},
};

const FlagSpec* find_flag(const std::string& flag) {
  for (const auto& spec : kFlags)
    if (flag == spec.flag) return &spec;
  return nullptr;
}

// Keys that are legal in a config file. Kind keys mirror the boolean flags.
bool known_key(const std::string& key) {
  for (const auto& spec : kFlags)
    if (spec.key && key == spec.key) return true;
  return key == "state.kind" || key == "observable.kind" || key == "frequency_model";
}

std::string trim(const std::string& text) {
  std::size_t first = 0, last = text.size();
  while (first < last && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(text[last - 1]))) --last;
  return text.substr(first, last - first);
}

// Raw values from one source (flags or config file) plus the system kind the
// source implies.
struct RawSource {
  std::map<std::string, std::string> values;
  std::optional<std::string> system_kind;
};

RawSource parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  RawSource source;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto comment = line.find('#'); comment != std::string::npos)
      line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto equals = line.find('=');
    if (equals == std::string::npos)
      usage_error("config line " + std::to_string(line_number) + ": expected key = value");
    const std::string key = trim(line.substr(0, equals));
    const std::string value = trim(line.substr(equals + 1));
    if (!known_key(key))
      usage_error("config line " + std::to_string(line_number) + ": unknown key '" + key + "'");
    if (source.values.count(key))
      usage_error("config line " + std::to_string(line_number) + ": duplicate key '" + key + "'");
    source.values.emplace(key, value);
  }
  std::optional<std::string> kind;
  auto note_kind = [&](const char* key, const char* name) {
    if (!source.values.count(key)) return;
    if (kind && *kind != name)
      usage_error("conflicting system specs in config file ('" + *kind + "' and '" +
                  name + "')");
    kind = name;
  };
  note_kind("system.modes", "modes");
  note_kind("system.cutoffs", "modes");
  note_kind("system.ladder", "ladder");
  note_kind("system.random.dim", "random");
  source.system_kind = kind;
  return source;
}

// Merged view: flags override file values key by key; the flag-level system
// kind, when present, hides the file's choice entirely.
struct MergedConfig {
  RawSource flags;
  RawSource file;

  std::optional<std::string> get(const std::string& key) const {
    if (const auto hit = flags.values.find(key); hit != flags.values.end())
      return hit->second;
    if (const auto hit = file.values.find(key); hit != file.values.end())
      return hit->second;
    return std::nullopt;
  }

  // Display name for error messages: flag spelling when the value came from
  // the command line, the bare key otherwise.
  std::string display(const std::string& key) const {
    if (flags.values.count(key)) {
      for (const auto& spec : kFlags)
        if (spec.key && key == spec.key) return spec.flag;
    }
    return key;
  }

  std::optional<std::string> system_kind() const {
    if (flags.system_kind) return flags.system_kind;
    return file.system_kind;
  }
};

Real parse_real(const MergedConfig& merged, const std::string& key,
                const std::string& raw) {
  char* end = nullptr;
  const Real value = std::strtod(raw.c_str(), &end);
  if (end != raw.c_str() + raw.size() || raw.empty())
    usage_error("invalid value for " + merged.display(key) + ": '" + raw +
                "' is not a number");
  return value;
}

long long parse_int(const MergedConfig& merged, const std::string& key,
                    const std::string& raw) {
  char* end = nullptr;
  const long long value = std::strtoll(raw.c_str(), &end, 10);
  if (end != raw.c_str() + raw.size() || raw.empty())
    usage_error("invalid value for " + merged.display(key) + ": '" + raw +
                "' is not an integer");
  return value;
}

std::uint64_t parse_seed(const MergedConfig& merged, const std::string& key,
                         const std::string& raw) {
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw.c_str(), &end, 10);
  if (end != raw.c_str() + raw.size() || raw.empty())
    usage_error("invalid value for " + merged.display(key) + ": '" + raw +
                "' is not an unsigned integer");
  return value;
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream stream(text);
  while (std::getline(stream, part, separator)) parts.push_back(part);
  return parts;
}

LogGrid parse_grid(const MergedConfig& merged, const std::string& key,
                   const std::string& raw) {
  const auto parts = split(raw, ':');
  if (parts.size() != 3)
    usage_error("invalid value for " + merged.display(key) + ": expected lo:hi:points");
  LogGrid grid;
  grid.lo = parse_real(merged, key, parts[0]);
  grid.hi = parse_real(merged, key, parts[1]);
  grid.points = parse_int(merged, key, parts[2]);
  if (!(grid.lo > 0) || grid.hi < grid.lo || grid.points < 2)
    usage_error("invalid value for " + merged.display(key) +
                ": need 0 < lo <= hi and points >= 2");
  return grid;
}

std::pair<Index, Index> parse_range(const MergedConfig& merged, const std::string& key,
                                    const std::string& raw) {
  const auto parts = split(raw, ':');
  if (parts.size() == 1) {
    const long long single = parse_int(merged, key, parts[0]);
    if (single < 1) usage_error("invalid value for " + merged.display(key) + ": must be >= 1");
    return {single, single};
  }
  if (parts.size() != 2)
    usage_error("invalid value for " + merged.display(key) + ": expected lo:hi");
  const long long lo = parse_int(merged, key, parts[0]);
  const long long hi = parse_int(merged, key, parts[1]);
  if (lo < 1 || hi < lo)
    usage_error("invalid value for " + merged.display(key) + ": need 1 <= lo <= hi");
  return {lo, hi};
}

RawSource parse_flags(const std::vector<std::string>& args, std::size_t first,
                      std::optional<std::string>& config_path) {
  RawSource source;
  std::map<std::string, std::string> kind_setter;  // kind key -> flag that set it
  for (std::size_t i = first; i < args.size(); ++i) {
    const std::string& token = args[i];
    if (token == "--config") {
      if (i + 1 >= args.size()) usage_error("missing value for --config");
      config_path = args[++i];
      continue;
    }
    const FlagSpec* spec = find_flag(token);
    if (!spec) usage_error("unknown flag '" + token + "'");

    if (spec->system_kind) {
      if (source.system_kind && *source.system_kind != spec->system_kind)
        usage_error("conflicting system specs (" + kind_setter["system"] + " and " +
                    token + ")");
      source.system_kind = spec->system_kind;
      kind_setter.emplace("system", token);
    }
    if (spec->set_key) {
      const auto existing = source.values.find(spec->set_key);
      if (existing != source.values.end() && existing->second != spec->set_value)
        usage_error("conflicting " + std::string(spec->set_key) + " specs (" +
                    kind_setter[spec->set_key] + " and " + token + ")");
      source.values[spec->set_key] = spec->set_value;
      kind_setter.emplace(spec->set_key, token);
    }
    if (spec->takes_value) {
      if (i + 1 >= args.size()) usage_error("missing value for " + token);
      source.values[spec->key] = args[++i];
    }
  }
  return source;
}

std::vector<Real> parse_real_list(const MergedConfig& merged, const std::string& key,
                                  const std::string& raw) {
  std::vector<Real> values;
  for (const auto& part : split(raw, ','))
    values.push_back(parse_real(merged, key, trim(part)));
  if (values.empty())
    usage_error("invalid value for " + merged.display(key) + ": empty list");
  return values;
}

std::vector<int> parse_int_list(const MergedConfig& merged, const std::string& key,
                                const std::string& raw) {
  std::vector<int> values;
  for (const auto& part : split(raw, ','))
    values.push_back(static_cast<int>(parse_int(merged, key, trim(part))));
  if (values.empty())
    usage_error("invalid value for " + merged.display(key) + ": empty list");
  return values;
}

const std::string kCommands[] = {"spectrum",      "resonances", "variance",
                                 "scan-resonance", "scan-window", "scan-gaps",
                                 "scan-epsilon"};

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm split{};
  gmtime_r(&now, &split);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y%m%d-%H%M%S", &split);
  return buffer;
}

Spectrum build_spectrum(const RunConfig& config) {
  if (!config.system)
    usage_error(config.command + ": missing system spec (--modes, --ladder or --random)");
  if (const auto* spec = std::get_if<ModeSystemSpec>(&*config.system)) {
    Eigen::VectorXd frequencies =
        Eigen::Map<const Eigen::VectorXd>(spec->frequencies.data(),
                                          static_cast<Index>(spec->frequencies.size()));
    ModeSystem system;
    system.frequencies = frequencies;
    if (!spec->cutoffs.empty()) {
      system.cutoffs = Eigen::Map<const Eigen::VectorXi>(
          spec->cutoffs.data(), static_cast<Index>(spec->cutoffs.size()));
    } else if (config.cutoff) {
      system.cutoffs = Eigen::VectorXi::Constant(frequencies.size(), *config.cutoff);
    } else {
      usage_error("mode system: --cutoff or --cutoffs required");
    }
    return build_mode_spectrum(system, config.limits);
  }
  if (const auto* spec = std::get_if<LadderSpec>(&*config.system))
    return build_mode_spectrum(ladder_system(spec->dim), config.limits);
  const auto& spec = std::get<RandomSpec>(*config.system);
  const RandomSpectrumModel model =
      spec.model == "goe" ? RandomSpectrumModel{GoeModel{}}
                          : RandomSpectrumModel{UniformModel{spec.span}};
  return random_spectrum(spec.dim, model, config.seed, config.limits);
}

QuantumState build_state(const RunConfig& config, const Spectrum& spectrum) {
  if (!config.state)
    usage_error(config.command + ": missing state spec (--uniform or --gaussian)");
  if (std::holds_alternative<UniformStateSpec>(*config.state))
    return uniform_state(spectrum.dim());
  const auto& spec = std::get<GaussianStateSpec>(*config.state);
  if (!spec.width) usage_error("gaussian state: --width required");
  const Real center =
      spec.center ? *spec.center
                  : 0.5 * (spectrum.energies(0) + spectrum.energies(spectrum.dim() - 1));
  return gaussian_state(spectrum, center, *spec.width, spec.phases, spec.seed);
}

Observable build_observable(const RunConfig& config, const Spectrum& spectrum) {
  if (!config.observable)
    usage_error(config.command +
                ": missing observable spec (--hopping, --quadrature or --random-obs)");
  if (const auto* spec = std::get_if<HoppingSpec>(&*config.observable))
    return hopping_observable(spectrum.dim(), spec->amplitude, config.limits);
  if (const auto* spec = std::get_if<QuadratureSpec>(&*config.observable))
    return quadrature_observable(spectrum, spec->mode, config.limits);
  const auto& spec = std::get<RandomObservableSpec>(*config.observable);
  return random_hermitian_observable(spectrum.dim(), spec.seed, spec.target_range,
                                     config.limits);
}

VarianceMethod build_method(const RunConfig& config) {
  if (config.method == "sampling") return SamplingMethod{config.n_steps};
  return KernelMethod{};
}

// M and c for the resonance CSV: defined for ladder systems and for mode
// systems with a uniform cutoff, blank otherwise.
std::pair<std::optional<Index>, std::optional<Index>> mode_columns(
    const RunConfig& config) {
  if (!config.system) return {};
  if (const auto* spec = std::get_if<LadderSpec>(&*config.system))
    return {Index{1}, spec->dim - 1};
  if (const auto* spec = std::get_if<ModeSystemSpec>(&*config.system)) {
    const Index modes = static_cast<Index>(spec->frequencies.size());
    if (spec->cutoffs.empty() && config.cutoff)
      return {modes, static_cast<Index>(*config.cutoff)};
    if (!spec->cutoffs.empty() &&
        std::all_of(spec->cutoffs.begin(), spec->cutoffs.end(),
                    [&](int c) { return c == spec->cutoffs.front(); }))
      return {modes, static_cast<Index>(spec->cutoffs.front())};
    return {modes, std::nullopt};
  }
  return {};
}

void write_table(const RunConfig& config, const ScanTable& table, std::ostream& out) {
  if (config.format == "json")
    write_scan_json(out, table);
  else
    write_scan_csv(out, table);
}

void run_command(const RunConfig& config, std::ostream& out) {
  if (config.command == "spectrum") {
    const Spectrum spectrum = build_spectrum(config);
    write_spectrum_csv(out, spectrum);
    const GapStats stats = adjacent_gap_stats(spectrum);
    std::optional<ResolutionTime> resolution;
    if (stats.min_gap > 0) resolution = resolution_time(stats, config.omega_ref_hz);
    write_gap_stats_footer(out, stats, resolution);
    return;
  }

  if (config.command == "resonances") {
    const Spectrum spectrum = build_spectrum(config);
    if (!config.epsilon) usage_error("resonances: --epsilon (or --T) required");
    const GapList gaps = build_gap_list(spectrum, config.limits);
    const ResonanceCount count =
        count_near_resonant_quadruples(gaps, *config.epsilon, config.threads);
    const auto [modes, cutoff] = mode_columns(config);
    write_resonance_csv(out, modes, cutoff, spectrum.dim(), count);
    return;
  }

  if (config.command == "variance") {
    const Spectrum spectrum = build_spectrum(config);
    const QuantumState state = build_state(config, spectrum);
    const Observable observable = build_observable(config, spectrum);
    std::vector<Real> grid;
    if (config.t_grid)
      grid = log_spaced(*config.t_grid);
    else if (config.window)
      grid = {*config.window};
    else
      usage_error("variance: --T or --T-grid required");
    const VarianceReport report =
        bound_report(state, observable, spectrum, grid, config.gap_tol,
                     build_method(config), config.limits, config.threads);
    write_variance_csv(out, report);
    return;
  }

  if (config.command == "scan-resonance") {
    if (!config.m_range) usage_error("scan-resonance: --M required");
    const ScanTable table = scan_resonance_growth(
        config.m_range->first, config.m_range->second,
        static_cast<Index>(config.cutoff.value_or(1)), config.frequency_model,
        config.epsilon.value_or(1e-9), config.seed, config.limits, config.threads);
    write_table(config, table, out);
    return;
  }

  if (config.command == "scan-window") {
    const Spectrum spectrum = build_spectrum(config);
    const QuantumState state = build_state(config, spectrum);
    const Observable observable = build_observable(config, spectrum);
    if (!config.t_grid) usage_error("scan-window: --T-grid required");
    const ScanTable table =
        scan_window_variance(spectrum, state, observable, *config.t_grid,
                             config.gap_tol, build_method(config), config.limits,
                             config.threads);
    write_table(config, table, out);
    return;
  }

  if (config.command == "scan-gaps") {
    if (!config.m_range) usage_error("scan-gaps: --M required");
    const ScanTable table = scan_gap_statistics(
        config.m_range->first, config.m_range->second,
        static_cast<Index>(config.cutoff.value_or(1)), config.trials, config.seed,
        config.omega_ref_hz.value_or(1e9), config.limits, config.threads);
    write_table(config, table, out);
    return;
  }

  if (config.command == "scan-epsilon") {
    const Spectrum spectrum = build_spectrum(config);
    if (!config.eps_grid) usage_error("scan-epsilon: --eps-grid required");
    const ScanTable table =
        scan_epsilon(spectrum, *config.eps_grid, config.limits, config.threads);
    write_table(config, table, out);
    return;
  }

  usage_error("unknown command '" + config.command + "'");
}

void print_usage(std::ostream& out) {
  out << "eqaudit " << kToolVersion
      << " - finite-window equilibration audit for exact spectra\n"
         "\n"
         "usage: eqaudit <command> [flags]\n"
         "\n"
         "commands:\n"
         "  spectrum        emit the spectrum CSV with adjacent-gap statistics\n"
         "  resonances      count near-resonant energy quadruples\n"
         "  variance        finite/infinite-window variance report and bound\n"
         "  scan-resonance  resonance counts against mode number M\n"
         "  scan-window     variance against the averaging window T\n"
         "  scan-gaps       level-spacing statistics of random mode systems\n"
         "  scan-epsilon    resonance counts against the window epsilon\n"
         "\n"
         "system:      --modes w1,w2,... --cutoff c | --cutoffs c1,c2,... |\n"
         "             --ladder D | --random D [--model uniform|goe] [--span s]\n"
         "state:       --uniform | --gaussian [--center e] --width w\n"
         "             [--phases zero|random] [--state-seed n]\n"
         "observable:  --hopping a | --quadrature i | --random-obs r [--obs-seed n]\n"
         "windows:     --T t | --T-grid lo:hi:points   resonance: --epsilon e\n"
         "scans:       --M lo:hi --trials n --eps-grid lo:hi:points\n"
         "             [--commensurate] [--omega-ref hz]\n"
         "numerics:    --gap-tol x --method kernel|sampling --n-steps n\n"
         "             --seed n --threads n (env EQAUDIT_THREADS)\n"
         "caps:        --dim-cap n --eig-cap n --gap-cap n --work-cap x\n"
         "output:      --out path --format csv|json --config file\n"
         "\n"
         "exit codes: 0 ok, 1 usage, 2 numerical method, 3 i/o\n";
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty()) usage_error("missing command; try 'eqaudit help'");

  std::size_t first = 0;
  std::string command;
  if (!args[0].empty() && args[0][0] != '-') {
    command = args[0];
    first = 1;
  }
  if (command.empty()) usage_error("missing command; try 'eqaudit help'");
  if (std::find(std::begin(kCommands), std::end(kCommands), command) ==
      std::end(kCommands))
    usage_error("unknown command '" + command + "'");

  std::optional<std::string> config_path;
  MergedConfig merged;
  merged.flags = parse_flags(args, first, config_path);
  if (config_path) merged.file = parse_file(*config_path);

  RunConfig config;
  config.command = command;

  // system spec
  if (const auto kind = merged.system_kind()) {
    if (*kind == "modes") {
      ModeSystemSpec spec;
      const auto modes = merged.get("system.modes");
      if (!modes) usage_error("mode system: --modes required");
      spec.frequencies = parse_real_list(merged, "system.modes", *modes);
      if (const auto cutoffs = merged.get("system.cutoffs"))
        spec.cutoffs = parse_int_list(merged, "system.cutoffs", *cutoffs);
      config.system = spec;
    } else if (*kind == "ladder") {
      LadderSpec spec;
      spec.dim = parse_int(merged, "system.ladder", *merged.get("system.ladder"));
      if (spec.dim < 1)
        usage_error("invalid value for " + merged.display("system.ladder") +
                    ": must be >= 1");
      config.system = spec;
    } else {
      RandomSpec spec;
      spec.dim = parse_int(merged, "system.random.dim", *merged.get("system.random.dim"));
      if (const auto model = merged.get("system.random.model")) {
        if (*model != "uniform" && *model != "goe")
          usage_error("invalid value for " + merged.display("system.random.model") +
                      ": expected uniform or goe");
        spec.model = *model;
      }
      if (const auto span = merged.get("system.random.span")) {
        spec.span = parse_real(merged, "system.random.span", *span);
        if (!(spec.span > 0))
          usage_error("invalid value for " + merged.display("system.random.span") +
                      ": must be > 0");
      }
      config.system = spec;
    }
  }

  // state spec
  if (const auto kind = merged.get("state.kind")) {
    if (*kind == "uniform") {
      config.state = UniformStateSpec{};
    } else if (*kind == "gaussian") {
      GaussianStateSpec spec;
      if (const auto center = merged.get("state.center"))
        spec.center = parse_real(merged, "state.center", *center);
      if (const auto width = merged.get("state.width")) {
        spec.width = parse_real(merged, "state.width", *width);
        if (!(*spec.width > 0))
          usage_error("invalid value for " + merged.display("state.width") +
                      ": must be > 0");
      }
      if (const auto phases = merged.get("state.phases")) {
        if (*phases == "zero")
          spec.phases = Phases::zero;
        else if (*phases == "random")
          spec.phases = Phases::random;
        else
          usage_error("invalid value for " + merged.display("state.phases") +
                      ": expected zero or random");
      }
      if (const auto seed = merged.get("state.seed"))
        spec.seed = parse_seed(merged, "state.seed", *seed);
      config.state = spec;
    } else {
      usage_error("invalid value for state.kind: expected uniform or gaussian");
    }
  }

  // observable spec
  if (const auto kind = merged.get("observable.kind")) {
    if (*kind == "hopping") {
      HoppingSpec spec;
      if (const auto amplitude = merged.get("observable.amplitude"))
        spec.amplitude = parse_real(merged, "observable.amplitude", *amplitude);
      config.observable = spec;
    } else if (*kind == "quadrature") {
      QuadratureSpec spec;
      if (const auto mode = merged.get("observable.mode"))
        spec.mode = parse_int(merged, "observable.mode", *mode);
      config.observable = spec;
    } else if (*kind == "random") {
      RandomObservableSpec spec;
      if (const auto range = merged.get("observable.range")) {
        spec.target_range = parse_real(merged, "observable.range", *range);
        if (!(spec.target_range > 0))
          usage_error("invalid value for " + merged.display("observable.range") +
                      ": must be > 0");
      }
      if (const auto seed = merged.get("observable.seed"))
        spec.seed = parse_seed(merged, "observable.seed", *seed);
      config.observable = spec;
    } else {
      usage_error(
          "invalid value for observable.kind: expected hopping, quadrature or random");
    }
  }

  if (const auto cutoff = merged.get("cutoff")) {
    config.cutoff = static_cast<int>(parse_int(merged, "cutoff", *cutoff));
    if (*config.cutoff < 0)
      usage_error("invalid value for " + merged.display("cutoff") + ": must be >= 0");
  }
  if (const auto epsilon = merged.get("epsilon")) {
    config.epsilon = parse_real(merged, "epsilon", *epsilon);
    if (!(*config.epsilon > 0))
      usage_error("invalid value for " + merged.display("epsilon") + ": must be > 0");
  }
  if (const auto gap_tol = merged.get("gap_tol")) {
    config.gap_tol = parse_real(merged, "gap_tol", *gap_tol);
    if (*config.gap_tol < 0)
      usage_error("invalid value for " + merged.display("gap_tol") + ": must be >= 0");
  }
  if (const auto window = merged.get("T")) {
    config.window = parse_real(merged, "T", *window);
    if (!(*config.window > 0))
      usage_error("invalid value for " + merged.display("T") + ": must be > 0");
  }
  if (const auto grid = merged.get("T_grid"))
    config.t_grid = parse_grid(merged, "T_grid", *grid);
  if (const auto grid = merged.get("eps_grid"))
    config.eps_grid = parse_grid(merged, "eps_grid", *grid);
  if (const auto range = merged.get("M"))
    config.m_range = parse_range(merged, "M", *range);
  if (const auto trials = merged.get("trials")) {
    config.trials = parse_int(merged, "trials", *trials);
    if (config.trials < 1)
      usage_error("invalid value for " + merged.display("trials") + ": must be >= 1");
  }
  if (const auto seed = merged.get("seed"))
    config.seed = parse_seed(merged, "seed", *seed);
  if (const auto omega = merged.get("omega_ref_hz")) {
    config.omega_ref_hz = parse_real(merged, "omega_ref_hz", *omega);
    if (!(*config.omega_ref_hz > 0))
      usage_error("invalid value for " + merged.display("omega_ref_hz") +
                  ": must be > 0");
  }
  if (const auto model = merged.get("frequency_model")) {
    if (*model == "independent")
      config.frequency_model = FrequencyModel::independent;
    else if (*model == "commensurate")
      config.frequency_model = FrequencyModel::commensurate;
    else
      usage_error("invalid value for frequency_model: expected independent or commensurate");
  }
  if (const auto method = merged.get("method")) {
    if (*method != "kernel" && *method != "sampling")
      usage_error("invalid value for " + merged.display("method") +
                  ": expected kernel or sampling");
    config.method = *method;
  }
  if (const auto steps = merged.get("n_steps")) {
    config.n_steps = parse_int(merged, "n_steps", *steps);
    if (config.n_steps < 2 || config.n_steps % 2 != 0)
      usage_error("invalid value for " + merged.display("n_steps") +
                  ": must be even and >= 2");
  }
  if (const auto threads = merged.get("threads")) {
    config.threads = static_cast<int>(parse_int(merged, "threads", *threads));
    if (config.threads < 1)
      usage_error("invalid value for " + merged.display("threads") + ": must be >= 1");
  } else if (const char* env = std::getenv("EQAUDIT_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*env == '\0' || *end != '\0' || value < 1)
      usage_error("invalid value for EQAUDIT_THREADS: must be an integer >= 1");
    config.threads = static_cast<int>(value);
  }
  if (const auto out = merged.get("out")) config.out = *out;
  if (const auto format = merged.get("format")) {
    if (*format != "csv" && *format != "json")
      usage_error("invalid value for " + merged.display("format") +
                  ": expected csv or json");
    config.format = *format;
  }
  if (const auto cap = merged.get("caps.dimension")) {
    config.limits.dimension_cap = parse_int(merged, "caps.dimension", *cap);
    if (config.limits.dimension_cap < 1)
      usage_error("invalid value for " + merged.display("caps.dimension") +
                  ": must be >= 1");
  }
  if (const auto cap = merged.get("caps.eigensolver")) {
    config.limits.eigensolver_cap = parse_int(merged, "caps.eigensolver", *cap);
    if (config.limits.eigensolver_cap < 1)
      usage_error("invalid value for " + merged.display("caps.eigensolver") +
                  ": must be >= 1");
  }
  if (const auto cap = merged.get("caps.gap_list")) {
    config.limits.gap_list_cap = parse_int(merged, "caps.gap_list", *cap);
    if (config.limits.gap_list_cap < 2)
      usage_error("invalid value for " + merged.display("caps.gap_list") +
                  ": must be >= 2");
  }
  if (const auto cap = merged.get("caps.work")) {
    config.limits.kernel_work_cap = parse_real(merged, "caps.work", *cap);
    if (!(config.limits.kernel_work_cap > 0))
      usage_error("invalid value for " + merged.display("caps.work") +
                  ": must be > 0");
  }

  // the epsilon ~ 1/T pairing: epsilon defaults to 2 pi / T when T is given
  if (!config.epsilon && config.window)
    config.epsilon = 2.0 * std::numbers::pi / *config.window;

  return config;
}

void dispatch(const RunConfig& config, std::ostream& fallback_out, std::ostream& log) {
  const bool is_scan = config.command.rfind("scan-", 0) == 0;
  std::string path = config.out;
  if (path.empty() && is_scan) {
    std::string name = config.command;
    std::replace(name.begin(), name.end(), '-', '_');
    path = name + "_" + timestamp_utc() + "." + config.format;
  }

  if (path.empty()) {
    run_command(config, fallback_out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot open output file '" + path + "'");
  run_command(config, file);
  file.flush();
  if (!file) throw IoError("failed writing output file '" + path + "'");
  log << "wrote " << path << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    if (!args.empty() &&
        (args[0] == "help" || args[0] == "--help" || args[0] == "-h")) {
      print_usage(out);
      return kExitOk;
    }
    if (!args.empty() && (args[0] == "version" || args[0] == "--version")) {
      out << "eqaudit " << kToolVersion << '\n';
      return kExitOk;
    }
    const RunConfig config = parse_config(args);
    dispatch(config, out, err);
    return kExitOk;
  } catch (const IoError& error) {
    err << "error: " << kExitIo << ": " << error.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& error) {
    err << "error: " << kExitNumerical << ": " << error.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& error) {
    err << "error: " << kExitUsage << ": " << error.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace eqaudit::cli
