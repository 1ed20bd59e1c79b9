#include "eqaudit/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "eqaudit/io.hpp"
#include "eqaudit/numerics.hpp"
#include "eqaudit/parallel.hpp"

namespace eqaudit {

namespace {

std::string render_cell(const ScanTable::Cell& cell, int digits) {
  struct Renderer {
    int digits;
    std::string operator()(std::int64_t value) const { return std::to_string(value); }
    std::string operator()(u128 value) const { return to_string(value); }
    std::string operator()(Real value) const {
      char spec[8];
      std::snprintf(spec, sizeof(spec), "%%.%dg", digits);
      char buffer[64];
      std::snprintf(buffer, sizeof(buffer), spec, value);
      return buffer;
    }
    std::string operator()(const std::string& value) const { return value; }
  };
  return std::visit(Renderer{digits}, cell);
}

Real median(std::vector<Real> values) {
  std::sort(values.begin(), values.end());
  const std::size_t count = values.size();
  if (count == 0) return std::numeric_limits<Real>::quiet_NaN();
  if (count % 2 == 1) return values[count / 2];
  return 0.5 * (values[count / 2 - 1] + values[count / 2]);
}

}  // namespace

void write_scan_csv(std::ostream& out, const ScanTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const int digits = table.sig_digits.empty() ? 17 : table.sig_digits[i];
      out << (i ? "," : "") << render_cell(row[i], digits);
    }
    out << '\n';
  }
  for (const auto& [key, value] : table.metadata)
    out << "# " << key << " = " << value << '\n';
}

void write_scan_json(std::ostream& out, const ScanTable& table) {
  nlohmann::ordered_json doc;
  doc["name"] = table.name;
  doc["columns"] = table.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& cell : row) {
      if (const auto* as_int = std::get_if<std::int64_t>(&cell))
        cells.push_back(*as_int);
      else if (const auto* as_wide = std::get_if<u128>(&cell))
        cells.push_back(to_string(*as_wide));  // beyond JSON number precision
      else if (const auto* as_real = std::get_if<Real>(&cell))
        cells.push_back(*as_real);
      else if (const auto* as_text = std::get_if<std::string>(&cell))
        cells.push_back(as_text->empty() ? nlohmann::ordered_json{}
                                         : nlohmann::ordered_json(*as_text));
    }
    rows.push_back(std::move(cells));
  }
  doc["rows"] = std::move(rows);
  nlohmann::ordered_json metadata;
  for (const auto& [key, value] : table.metadata) metadata[key] = value;
  doc["metadata"] = std::move(metadata);
  out << doc.dump(2) << '\n';
}

std::vector<Real> log_spaced(const LogGrid& grid) {
  if (!(grid.lo > 0) || !(grid.hi >= grid.lo) || grid.points < 2)
    throw std::invalid_argument("log grid: need 0 < lo <= hi and points >= 2");
  std::vector<Real> values(static_cast<std::size_t>(grid.points));
  const Real step = std::log(grid.hi / grid.lo) / static_cast<Real>(grid.points - 1);
  for (Index i = 0; i < grid.points; ++i)
    values[static_cast<std::size_t>(i)] = grid.lo * std::exp(step * static_cast<Real>(i));
  values.front() = grid.lo;
  values.back() = grid.hi;
  return values;
}

ScanTable scan_resonance_growth(Index m_min, Index m_max, Index cutoff,
                                FrequencyModel model, Real epsilon,
                                std::uint64_t seed, const Limits& limits,
                                int threads) {
  if (m_min < 1 || m_max < m_min)
    throw std::invalid_argument("resonance scan: need 1 <= m_min <= m_max");
  if (!(epsilon > 0)) throw std::invalid_argument("resonance scan: epsilon must be > 0");

  ScanTable table;
  table.name = "scan_resonance";
  table.columns = {"M", "c", "D", "analytic_total", "counted_total", "kept", "extra",
                   "extra_over_kept"};
  table.sig_digits = {17, 17, 17, 17, 17, 17, 17, 6};

  const Eigen::VectorXd frequencies = model == FrequencyModel::independent
                                          ? square_free_frequencies(m_max)
                                          : Eigen::VectorXd::Ones(m_max);
  for (Index m = m_min; m <= m_max; ++m) {
    const ResonanceCount analytic = mode_resonance_count_analytic(m, cutoff);
    const u128 dim = checked_pow(static_cast<u128>(cutoff) + 1, static_cast<unsigned>(m));

    std::vector<ScanTable::Cell> row;
    row.emplace_back(static_cast<std::int64_t>(m));
    row.emplace_back(static_cast<std::int64_t>(cutoff));
    row.emplace_back(dim);
    row.emplace_back(analytic.total);

    u128 kept = analytic.kept;
    u128 extra = analytic.extra;
    if (dim <= static_cast<u128>(std::min(limits.gap_list_cap, limits.dimension_cap))) {
      const ModeSystem system =
          uniform_cutoff_system(frequencies.head(m), static_cast<int>(cutoff));
      const Spectrum spectrum = build_mode_spectrum(system, limits);
      const ResonanceCount counted =
          count_near_resonant_quadruples(build_gap_list(spectrum, limits), epsilon,
                                         threads);
      row.emplace_back(counted.total);
      kept = counted.kept;
      extra = counted.extra;
    } else {
      row.emplace_back(std::string{});
    }
    row.emplace_back(kept);
    row.emplace_back(extra);
    row.emplace_back(static_cast<Real>(extra) / static_cast<Real>(kept));
    table.rows.push_back(std::move(row));
  }

  table.metadata.emplace_back("cutoff", std::to_string(cutoff));
  table.metadata.emplace_back("frequency_model", model == FrequencyModel::independent
                                                     ? "independent"
                                                     : "commensurate");
  table.metadata.emplace_back("epsilon", g17(epsilon));
  table.metadata.emplace_back("seed", std::to_string(seed));
  table.metadata.emplace_back("tool_version", kToolVersion);
  return table;
}

ScanTable scan_window_variance(const Spectrum& spectrum, const QuantumState& state,
                               const Observable& observable, const LogGrid& t_grid,
                               std::optional<Real> gap_tol,
                               const VarianceMethod& method, const Limits& limits,
                               int threads) {
  const std::vector<Real> windows = log_spaced(t_grid);
  const VarianceReport report =
      bound_report(state, observable, spectrum, windows, gap_tol, method, limits,
                   threads);

  ScanTable table;
  table.name = "scan_window";
  table.columns = {"T", "sigma2_T", "sigma2_inf", "truncated", "bound",
                   "sigma2_T_over_bound"};
  for (const auto& [window, value] : report.sigma2_T) {
    table.rows.push_back({window, value, report.sigma2_inf, report.truncated,
                          report.bound, value / report.bound});
  }
  table.metadata.emplace_back("dim", std::to_string(spectrum.dim()));
  table.metadata.emplace_back("gap_groups", std::to_string(report.gap_groups));
  table.metadata.emplace_back(
      "method", std::holds_alternative<KernelMethod>(method) ? "kernel" : "sampling");
  table.metadata.emplace_back("tool_version", kToolVersion);
  return table;
}

ScanTable scan_gap_statistics(Index m_min, Index m_max, Index cutoff, Index trials,
                              std::uint64_t seed, std::optional<Real> omega_ref_hz,
                              const Limits& limits, int threads) {
  if (m_min < 1 || m_max < m_min)
    throw std::invalid_argument("gap scan: need 1 <= m_min <= m_max");
  if (trials < 1) throw std::invalid_argument("gap scan: trials must be >= 1");

  struct RowData {
    Index modes = 0;
    Index dim = 0;
    Real median_min_gap = 0;
    Real mean_gap = 0;
    Real median_t_res = 0;
    Real universe_ratio = 0;
    Index degenerate = 0;
  };

  const Index row_count = m_max - m_min + 1;
  auto compute_rows = [&](Index begin, Index end) {
    std::vector<RowData> rows;
    for (Index r = begin; r < end; ++r) {
      const Index modes = m_min + r;
      RowData data;
      data.modes = modes;
      std::vector<Real> min_gaps, mean_gaps;
      for (Index trial = 0; trial < trials; ++trial) {
        // per-trial seed; the same trial index reuses the same frequency
        // stream prefix across M values
        RandomStream rng(seed ^ static_cast<std::uint64_t>(trial));
        Eigen::VectorXd frequencies(modes);
        for (Index i = 0; i < modes; ++i) frequencies(i) = 0.5 + rng.unit_uniform();
        const Spectrum spectrum = build_mode_spectrum(
            uniform_cutoff_system(frequencies, static_cast<int>(cutoff)), limits);
        data.dim = spectrum.dim();
        const GapStats stats = adjacent_gap_stats(spectrum);
        if (stats.min_gap <= 0) {
          ++data.degenerate;
          continue;
        }
        min_gaps.push_back(stats.min_gap);
        mean_gaps.push_back(stats.mean_gap);
      }
      data.median_min_gap = median(min_gaps);
      Real mean_of_means = 0;
      for (const Real value : mean_gaps) mean_of_means += value;
      data.mean_gap = mean_gaps.empty()
                          ? std::numeric_limits<Real>::quiet_NaN()
                          : mean_of_means / static_cast<Real>(mean_gaps.size());
      if (omega_ref_hz && !min_gaps.empty()) {
        std::vector<Real> t_res_values;
        for (const Real gap : min_gaps)
          t_res_values.push_back(2.0 * std::numbers::pi / gap / *omega_ref_hz);
        data.median_t_res = median(t_res_values);
        data.universe_ratio = data.median_t_res / kAgeOfUniverseSeconds;
      } else {
        data.median_t_res = std::numeric_limits<Real>::quiet_NaN();
        data.universe_ratio = std::numeric_limits<Real>::quiet_NaN();
      }
      rows.push_back(data);
    }
    return rows;
  };

  std::vector<RowData> rows;
  for (auto& chunk : map_chunks<std::vector<RowData>>(row_count, threads, compute_rows))
    rows.insert(rows.end(), chunk.begin(), chunk.end());

  ScanTable table;
  table.name = "scan_gaps";
  table.columns = {"M",
                   "D",
                   "median_min_gap",
                   "mean_gap",
                   "median_t_res_seconds",
                   "universe_ratio",
                   "degenerate_trials"};
  for (const auto& data : rows) {
    table.rows.push_back({static_cast<std::int64_t>(data.modes),
                          static_cast<std::int64_t>(data.dim), data.median_min_gap,
                          data.mean_gap, data.median_t_res, data.universe_ratio,
                          static_cast<std::int64_t>(data.degenerate)});
  }

  // least-squares line through (M, log median_min_gap)
  Real sum_m = 0, sum_y = 0, sum_mm = 0, sum_my = 0;
  Index fit_points = 0;
  for (const auto& data : rows) {
    if (!(data.median_min_gap > 0)) continue;
    const Real y = std::log(data.median_min_gap);
    const Real m = static_cast<Real>(data.modes);
    sum_m += m;
    sum_y += y;
    sum_mm += m * m;
    sum_my += m * y;
    ++fit_points;
  }
  table.metadata.emplace_back("cutoff", std::to_string(cutoff));
  table.metadata.emplace_back("trials", std::to_string(trials));
  table.metadata.emplace_back("seed", std::to_string(seed));
  if (omega_ref_hz)
    table.metadata.emplace_back("omega_ref_hz", g17(*omega_ref_hz));
  if (fit_points >= 2) {
    const Real denom = static_cast<Real>(fit_points) * sum_mm - sum_m * sum_m;
    const Real slope = (static_cast<Real>(fit_points) * sum_my - sum_m * sum_y) / denom;
    const Real intercept = (sum_y - slope * sum_m) / static_cast<Real>(fit_points);
    const Real extrapolated_gap = std::exp(intercept + slope * 100.0);
    table.metadata.emplace_back("fit_slope_log_median_min_gap", g17(slope));
    table.metadata.emplace_back("fit_intercept_log_median_min_gap", g17(intercept));
    table.metadata.emplace_back("extrapolated_min_gap_M100", g17(extrapolated_gap));
    if (omega_ref_hz) {
      const Real t_res = 2.0 * std::numbers::pi / extrapolated_gap / *omega_ref_hz;
      table.metadata.emplace_back("extrapolated_t_res_seconds_M100", g17(t_res));
      table.metadata.emplace_back("extrapolated_universe_ratio_M100",
                                  g17(t_res / kAgeOfUniverseSeconds));
    }
  }
  table.metadata.emplace_back("tool_version", kToolVersion);
  return table;
}

ScanTable scan_epsilon(const Spectrum& spectrum, const LogGrid& eps_grid,
                       const Limits& limits, int threads) {
  const std::vector<Real> epsilons = log_spaced(eps_grid);
  const GapList gaps = build_gap_list(spectrum, limits);

  ScanTable table;
  table.name = "scan_epsilon";
  table.columns = {"epsilon", "total", "kept", "extra"};
  for (const Real epsilon : epsilons) {
    const ResonanceCount count = count_near_resonant_quadruples(gaps, epsilon, threads);
    table.rows.push_back({epsilon, count.total, count.kept, count.extra});
  }
  table.metadata.emplace_back("dim", std::to_string(spectrum.dim()));
  table.metadata.emplace_back("tool_version", kToolVersion);
  return table;
}

}  // namespace eqaudit
