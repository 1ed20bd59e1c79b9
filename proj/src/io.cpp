#include "eqaudit/io.hpp"

#include <cstdio>
#include <ostream>

namespace eqaudit {

namespace {

std::string format_real(Real value, const char* spec) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), spec, value);
  return buffer;
}

}  // namespace

std::string g17(Real value) { return format_real(value, "%.17g"); }
std::string g6(Real value) { return format_real(value, "%.6g"); }

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
  out << "index,energy";
  const Index modes = spectrum.has_labels() ? spectrum.labels.front().size() : 0;
  for (Index i = 0; i < modes; ++i) out << ",occ_" << i;
  out << '\n';
  for (Index n = 0; n < spectrum.dim(); ++n) {
    out << n << ',' << g17(spectrum.energies(n));
    if (spectrum.has_labels()) {
      const auto& label = spectrum.labels[static_cast<std::size_t>(n)];
      for (Index i = 0; i < modes; ++i) out << ',' << label(i);
    }
    out << '\n';
  }
}

void write_gap_stats_footer(std::ostream& out, const GapStats& stats,
                            const std::optional<ResolutionTime>& resolution) {
  out << "min_gap," << g17(stats.min_gap) << '\n';
  out << "mean_gap," << g17(stats.mean_gap) << '\n';
  out << "max_gap," << g17(stats.max_gap) << '\n';
  out << "span," << g17(stats.span) << '\n';
  out << "dim," << stats.dim << '\n';
  if (resolution) {
    out << "t_res_dimensionless," << g17(resolution->dimensionless) << '\n';
    if (resolution->seconds)
      out << "t_res_seconds," << g17(*resolution->seconds) << '\n';
    if (resolution->universe_ratio)
      out << "universe_ratio," << g17(*resolution->universe_ratio) << '\n';
  }
}

void write_resonance_csv(std::ostream& out, std::optional<Index> modes,
                         std::optional<Index> cutoff, Index dim,
                         const ResonanceCount& count) {
  out << "M,c,D,total,kept,extra,ratio\n";
  if (modes) out << *modes;
  out << ',';
  if (cutoff) out << *cutoff;
  out << ',' << dim << ',' << to_string(count.total) << ',' << to_string(count.kept)
      << ',' << to_string(count.extra) << ','
      << g6(static_cast<Real>(count.extra) / static_cast<Real>(count.kept)) << '\n';
}

void write_variance_csv(std::ostream& out, const VarianceReport& report) {
  out << "T,sigma2_T\n";
  for (const auto& [T, value] : report.sigma2_T)
    out << g17(T) << ',' << g17(value) << '\n';
  out << "sigma2_inf," << g17(report.sigma2_inf) << '\n';
  out << "truncated," << g17(report.truncated) << '\n';
  out << "bound," << g17(report.bound) << '\n';
  out << "d0_squared," << g17(report.d0_squared) << '\n';
  out << "ratio_inf_over_bound," << g17(report.ratio_inf_over_bound) << '\n';
  out << "ratio_inf_over_truncated," << g17(report.ratio_inf_over_truncated) << '\n';
  out << "gap_groups," << report.gap_groups << '\n';
}

}  // namespace eqaudit
