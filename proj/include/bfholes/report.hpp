#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bfholes/rare_events.hpp"
#include "bfholes/sampling.hpp"

namespace bfholes {

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

enum class Format { csv, json };
const char* to_string(Format f);
Format format_from_string(const std::string& s);

/// Doubles with 17 significant digits, so parsing gives back the same bits.
std::string format_cell(const Cell& c);

std::string to_csv(const Table& t);
std::string to_json(const Table& t);

struct ParsedCsv {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};
ParsedCsv parse_csv(const std::string& text);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

struct ReportMeta {
  std::string experiment;
  std::string config_hash;
  double wall_clock_seconds = 0.0;
};

/// Writes `path` and the sidecar `path.meta.json` (version, config hash, wall clock).
void emit_report(const Table& t, Format format, const std::string& path, const ReportMeta& meta);

/// experiment, kind, m, r, spacing_or_delta, trials, p_hat, ci_low, ci_high, sampler,
/// seed_master, seed_trial_base, plan_degree, uncertain_fraction
std::vector<std::string> estimate_columns();
std::vector<Cell> estimate_row(const std::string& experiment, const std::string& kind, int m, double r,
                               double spacing_or_delta, const RareEventEstimate& e);

/// Columnar text: '#' header lines (m, degree, radius, seed triple, log_weight), then one
/// coefficient per line in canonical order.
void write_draw(std::ostream& out, const CoefficientDraw& draw);
CoefficientDraw read_draw(std::istream& in);

struct FitPoint {
  double r = 0.0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t trials = 0;
};

struct ExponentFit {
  std::vector<double> radii;
  std::vector<double> log_neg_log_p;
  std::vector<double> sigma;  // delta-method standard deviation of each y
  double slope = 0.0;
  double intercept = 0.0;
  double r2_fit = 0.0;
  double slope_se = 0.0;
  std::pair<double, double> slope_ci{0.0, 0.0};
  /// Zero-hit points: (r, one-sided Clopper-Pearson upper bound).
  std::vector<std::pair<double, double>> zero_hit_bounds;
  std::vector<double> rejected_radii;
};

/// 1 - (alpha/2)^{1/n}: upper end of the two-sided Clopper-Pearson interval at 0 successes.
double clopper_pearson_zero_upper(std::uint64_t trials, double alpha = 0.05);

/// Weighted least squares of log(-log p) on log r over points with p in (0, 1) and
/// (ci_high - ci_low) / p <= threshold. Weights from sigma_p = width / (2 * 1.96) through
/// dy/dp = 1 / (p log p). Throws InsufficientData below 3 usable points.
ExponentFit fit_decay_exponent(const std::vector<FitPoint>& points, double threshold = 1.0);

}  // namespace bfholes
