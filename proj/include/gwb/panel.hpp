#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwb/sym_matrix.hpp"

namespace gwb {

class Rng;

enum class CsvKind { Prices, Returns };

// Rectangular per-period simple-return history. No missing cells; dates
// strictly increasing (ISO-8601 strings compare chronologically).
struct ReturnsPanel {
  std::vector<std::string> dates;
  std::vector<std::string> tickers;
  Matrix returns;

  Index n_periods() const { return returns.rows(); }
  Index n_assets() const { return returns.cols(); }
};

struct LoadReport {
  std::vector<std::string> dropped_tickers;
  std::int64_t dropped_rows = 0;
};

// Reads `date,ticker1,ticker2,...` CSV. Empty cells mark missing data: tickers
// with fewer than min_history observed cells are dropped first, then any row
// still missing a value is dropped (counted in the report). Prices must be
// positive and are turned into simple returns p_t / p_{t-1} - 1.
ReturnsPanel load_returns_csv(const std::string& path, CsvKind kind, Index min_history,
                              LoadReport* report = nullptr);

// Uniform random n_assets-subset of the tickers, original column order kept.
ReturnsPanel subsample_universe(const ReturnsPanel& panel, Index n_assets, Rng& rng);

}  // namespace gwb
