#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwb/sym_matrix.hpp"

namespace gwb {

// Critical value used for significance calls (p = 0.001, one-sided, large df).
inline constexpr double kCriticalT = 3.125;

// Annualized Sharpe ratio: mean / sample-std * sqrt(periods_per_year).
// Requires at least two observations and nonzero variance.
double sharpe_ratio(const Vector& returns, double periods_per_year);

// Mean pairwise difference of per-path scores: mean(a - b).
double outperformance(const Vector& a, const Vector& b);

// Paired t-statistic: sqrt(n) * mean(a - b) / std(a - b), sample std (n - 1).
double t_statistic(const Vector& a, const Vector& b);

inline bool is_significant(double t, double critical = kCriticalT) { return t > critical; }

// Aggregated experiment output. sharpe is n_paths x n_methods; delta_s and
// tstat are antisymmetric n_methods x n_methods tables (row versus column).
struct RunReport {
  std::vector<std::string> methods;
  Matrix sharpe;
  Matrix delta_s;
  Matrix tstat;
  nlohmann::json config;
  std::vector<std::uint64_t> seeds;
  nlohmann::json diagnostics;
};

// Fills the pairwise tables from the per-path Sharpe matrix.
RunReport build_report(std::vector<std::string> methods, Matrix sharpe, nlohmann::json config,
                       std::vector<std::uint64_t> seeds);

struct HistogramRow {
  std::string method;
  double bin_left = 0.0;
  double bin_right = 0.0;
  std::int64_t count = 0;
};

// Per-method Sharpe histogram on shared Freedman-Diaconis bins (pooled values).
std::vector<HistogramRow> sharpe_histogram(const RunReport& report);

enum class ReportFormat { Json, Csv };

// Writes the report. Json: <prefix>.json (canonical form). Csv: <prefix>_delta_s.csv,
// <prefix>_tstat.csv and <prefix>_histogram.csv. Returns the paths written.
std::vector<std::string> emit_report(const RunReport& report, const std::string& prefix,
                                     ReportFormat format);

}  // namespace gwb
