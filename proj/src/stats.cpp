#include "gwb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gwb/errors.hpp"
#include "gwb/json_io.hpp"

namespace gwb {

namespace {

double sample_std(const Vector& x) {
  const double mean = x.mean();
  const double ss = (x.array() - mean).square().sum();
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

void check_pair(const Vector& a, const Vector& b) {
  if (a.size() != b.size())
    fail(Errc::length_mismatch, "paired series have lengths " + std::to_string(a.size()) +
                                    " and " + std::to_string(b.size()));
  if (a.size() < 2) fail(Errc::too_short, "paired statistics need at least two observations");
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double sharpe_ratio(const Vector& returns, double periods_per_year) {
  if (returns.size() < 2)
    fail(Errc::too_short, "Sharpe ratio needs at least two observations, got " +
                              std::to_string(returns.size()));
  if (!(periods_per_year > 0.0))
    fail(Errc::out_of_range, "periods_per_year must be positive");
  const double sd = sample_std(returns);
  if (sd == 0.0) fail(Errc::zero_variance, "Sharpe ratio undefined for a constant series");
  return returns.mean() / sd * std::sqrt(periods_per_year);
}

double outperformance(const Vector& a, const Vector& b) {
  check_pair(a, b);
  return (a - b).mean();
}

double t_statistic(const Vector& a, const Vector& b) {
  check_pair(a, b);
  const Vector d = a - b;
  const double sd = sample_std(d);
  if (sd == 0.0) {
    if (d.mean() == 0.0) return 0.0;
    fail(Errc::zero_variance, "t-statistic undefined: constant nonzero difference series");
  }
  return std::sqrt(static_cast<double>(d.size())) * d.mean() / sd;
}

RunReport build_report(std::vector<std::string> methods, Matrix sharpe, nlohmann::json config,
                       std::vector<std::uint64_t> seeds) {
  const Index m = static_cast<Index>(methods.size());
  if (m == 0) fail(Errc::out_of_range, "report needs at least one method");
  if (sharpe.cols() != m)
    fail(Errc::dimension_mismatch, "sharpe matrix has " + std::to_string(sharpe.cols()) +
                                       " columns for " + std::to_string(methods.size()) +
                                       " methods");
  if (sharpe.rows() < 2)
    fail(Errc::too_short, "report needs at least two paths, got " + std::to_string(sharpe.rows()));

  RunReport r;
  r.methods = std::move(methods);
  r.sharpe = std::move(sharpe);
  r.config = std::move(config);
  r.seeds = std::move(seeds);
  r.delta_s = Matrix::Zero(m, m);
  r.tstat = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double ds = outperformance(r.sharpe.col(i), r.sharpe.col(j));
      const double t = t_statistic(r.sharpe.col(i), r.sharpe.col(j));
      r.delta_s(i, j) = ds;
      r.delta_s(j, i) = -ds;
      r.tstat(i, j) = t;
      r.tstat(j, i) = -t;
    }
  }
  return r;
}

std::vector<HistogramRow> sharpe_histogram(const RunReport& report) {
  const Index n = report.sharpe.rows();
  const Index m = report.sharpe.cols();
  if (n < 2) fail(Errc::too_short, "histogram needs at least two paths");

  std::vector<double> pooled(report.sharpe.data(), report.sharpe.data() + n * m);
  std::sort(pooled.begin(), pooled.end());
  const double lo = pooled.front();
  const double hi = pooled.back();

  auto quantile = [&pooled](double q) {
    const double pos = q * static_cast<double>(pooled.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= pooled.size()) return pooled.back();
    return pooled[i] * (1.0 - frac) + pooled[i + 1] * frac;
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  // Freedman-Diaconis width on the pooled sample; fall back to a single bin
  // when every value coincides.
  double width = 2.0 * iqr / std::cbrt(static_cast<double>(pooled.size()));
  std::int64_t n_bins = 1;
  if (width > 0.0 && hi > lo)
    n_bins = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((hi - lo) / width)));
  else if (hi > lo)
    n_bins = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(pooled.size()))));
  width = n_bins > 0 && hi > lo ? (hi - lo) / static_cast<double>(n_bins) : 1.0;

  std::vector<HistogramRow> rows;
  rows.reserve(static_cast<std::size_t>(m * n_bins));
  for (Index c = 0; c < m; ++c) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n_bins), 0);
    for (Index i = 0; i < n; ++i) {
      const double v = report.sharpe(i, c);
      auto bin = hi > lo ? static_cast<std::int64_t>((v - lo) / width) : 0;
      bin = std::clamp<std::int64_t>(bin, 0, n_bins - 1);
      ++counts[static_cast<std::size_t>(bin)];
    }
    for (std::int64_t b = 0; b < n_bins; ++b) {
      HistogramRow row;
      row.method = report.methods[static_cast<std::size_t>(c)];
      row.bin_left = lo + width * static_cast<double>(b);
      row.bin_right = b + 1 == n_bins ? hi : lo + width * static_cast<double>(b + 1);
      row.count = counts[static_cast<std::size_t>(b)];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<std::string> emit_report(const RunReport& report, const std::string& prefix,
                                     ReportFormat format) {
  std::vector<std::string> written;
  if (format == ReportFormat::Json) {
    const std::string path = prefix + ".json";
    write_text_file(path, canonical_dump(report_to_json(report), 2));
    written.push_back(path);
    return written;
  }

  auto write_table = [&](const std::string& suffix, const Matrix& table) {
    std::ostringstream out;
    out << "method";
    for (const auto& name : report.methods) out << ',' << name;
    out << '\n';
    for (Index i = 0; i < table.rows(); ++i) {
      out << report.methods[static_cast<std::size_t>(i)];
      for (Index j = 0; j < table.cols(); ++j) out << ',' << csv_number(table(i, j));
      out << '\n';
    }
    const std::string path = prefix + suffix;
    write_text_file(path, out.str());
    written.push_back(path);
  };
  write_table("_delta_s.csv", report.delta_s);
  write_table("_tstat.csv", report.tstat);

  std::ostringstream hist;
  hist << "method,bin_left,bin_right,count\n";
  for (const auto& row : sharpe_histogram(report))
    hist << row.method << ',' << csv_number(row.bin_left) << ',' << csv_number(row.bin_right)
         << ',' << row.count << '\n';
  const std::string hist_path = prefix + "_histogram.csv";
  write_text_file(hist_path, hist.str());
  written.push_back(hist_path);
  return written;
}

}  // namespace gwb
