#include "gwb/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "gwb/errors.hpp"
#include "gwb/log.hpp"
#include "gwb/rng.hpp"

namespace gwb {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trimmed(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t file_row, const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    fail(Errc::parse_error, "row " + std::to_string(file_row) + ", column '" + column +
                                "': cannot parse '" + cell + "' as a number");
  return value;
}

}  // namespace

ReturnsPanel load_returns_csv(const std::string& path, CsvKind kind, Index min_history,
                              LoadReport* report) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) fail(Errc::parse_error, "'" + path + "' is empty");
  const auto header = split_line(std::move(line));
  if (header.size() < 2)
    fail(Errc::parse_error, "header must be 'date,ticker1,...', got " +
                                std::to_string(header.size()) + " column(s)");
  std::vector<std::string> tickers(header.begin() + 1, header.end());
  for (std::size_t c = 0; c < tickers.size(); ++c)
    if (tickers[c].empty())
      fail(Errc::parse_error, "header column " + std::to_string(c + 2) + " has an empty name");

  std::vector<std::string> dates;
  std::vector<std::vector<double>> raw;
  std::size_t file_row = 1;
  while (std::getline(in, line)) {
    ++file_row;
    const auto cells = split_line(std::move(line));
    if (cells.size() == 1 && cells[0].empty()) continue;
    if (cells.size() != header.size())
      fail(Errc::parse_error, "row " + std::to_string(file_row) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(header.size()));
    if (cells[0].empty())
      fail(Errc::parse_error, "row " + std::to_string(file_row) + ", column 'date': empty date");
    if (!dates.empty() && cells[0] <= dates.back())
      fail(Errc::parse_error, "row " + std::to_string(file_row) + ", column 'date': '" +
                                  cells[0] + "' does not come after '" + dates.back() + "'");
    std::vector<double> values(tickers.size(), kMissing);
    for (std::size_t c = 0; c < tickers.size(); ++c) {
      const std::string& cell = cells[c + 1];
      if (cell.empty()) continue;
      const double v = parse_cell(cell, file_row, tickers[c]);
      if (kind == CsvKind::Prices && v <= 0.0)
        fail(Errc::parse_error, "row " + std::to_string(file_row) + ", column '" + tickers[c] +
                                    "': price must be positive, got '" + cell + "'");
      values[c] = v;
    }
    dates.push_back(cells[0]);
    raw.push_back(std::move(values));
  }

  LoadReport local;
  LoadReport& drops = report ? *report : local;
  drops = LoadReport{};

  std::vector<std::size_t> kept_cols;
  for (std::size_t c = 0; c < tickers.size(); ++c) {
    Index observed = 0;
    for (const auto& row : raw) observed += !std::isnan(row[c]);
    if (observed >= min_history)
      kept_cols.push_back(c);
    else
      drops.dropped_tickers.push_back(tickers[c]);
  }
  if (kept_cols.empty())
    fail(Errc::too_few_assets,
         "no ticker has " + std::to_string(min_history) + " observations in '" + path + "'");

  std::vector<std::size_t> kept_rows;
  for (std::size_t r = 0; r < raw.size(); ++r) {
    const bool complete = std::none_of(kept_cols.begin(), kept_cols.end(),
                                       [&](std::size_t c) { return std::isnan(raw[r][c]); });
    if (complete)
      kept_rows.push_back(r);
    else
      ++drops.dropped_rows;
  }

  const std::size_t min_rows = kind == CsvKind::Prices ? 2 : 1;
  if (kept_rows.size() < min_rows)
    fail(Errc::too_short, "'" + path + "' keeps only " + std::to_string(kept_rows.size()) +
                              " complete row(s)");

  ReturnsPanel panel;
  panel.tickers.reserve(kept_cols.size());
  for (const auto c : kept_cols) panel.tickers.push_back(tickers[c]);

  Matrix values(static_cast<Index>(kept_rows.size()), static_cast<Index>(kept_cols.size()));
  for (std::size_t i = 0; i < kept_rows.size(); ++i)
    for (std::size_t j = 0; j < kept_cols.size(); ++j)
      values(static_cast<Index>(i), static_cast<Index>(j)) = raw[kept_rows[i]][kept_cols[j]];

  if (kind == CsvKind::Prices) {
    panel.dates.reserve(kept_rows.size() - 1);
    for (std::size_t i = 1; i < kept_rows.size(); ++i) panel.dates.push_back(dates[kept_rows[i]]);
    panel.returns = values.bottomRows(values.rows() - 1).array() /
                        values.topRows(values.rows() - 1).array() -
                    1.0;
  } else {
    panel.dates.reserve(kept_rows.size());
    for (const auto r : kept_rows) panel.dates.push_back(dates[r]);
    panel.returns = std::move(values);
  }

  if (!drops.dropped_tickers.empty() || drops.dropped_rows > 0)
    log::info("'" + path + "': dropped " + std::to_string(drops.dropped_tickers.size()) +
              " sparse ticker(s) and " + std::to_string(drops.dropped_rows) +
              " incomplete row(s)");
  return panel;
}

ReturnsPanel subsample_universe(const ReturnsPanel& panel, Index n_assets, Rng& rng) {
  const Index n = panel.n_assets();
  if (n_assets < 1) fail(Errc::out_of_range, "subset size must be positive");
  if (n_assets > n)
    fail(Errc::too_few_assets, "cannot pick " + std::to_string(n_assets) + " of " +
                                   std::to_string(n) + " tickers");

  std::vector<Index> indices(static_cast<std::size_t>(n));
  std::iota(indices.begin(), indices.end(), Index{0});
  for (Index i = 0; i < n_assets; ++i) {
    const Index j = i + static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(n - i)));
    std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
  }
  indices.resize(static_cast<std::size_t>(n_assets));
  std::sort(indices.begin(), indices.end());

  ReturnsPanel out;
  out.dates = panel.dates;
  out.tickers.reserve(indices.size());
  out.returns.resize(panel.n_periods(), n_assets);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.tickers.push_back(panel.tickers[static_cast<std::size_t>(indices[k])]);
    out.returns.col(static_cast<Index>(k)) = panel.returns.col(indices[k]);
  }
  return out;
}

}  // namespace gwb
