#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwb/panel.hpp"
#include "gwb/stats.hpp"
#include "gwb/trace.hpp"

namespace gwb {

// Historical walk-forward run over random universe subsets. Views are built at
// each rebalance from the trailing window only: the minimum-volatility
// portfolio's implied drift, stated with the trailing covariance as its
// uncertainty. tau defaults to 1 / lookback when read from JSON.
struct Stage2Config {
  std::string universe_csv;
  CsvKind csv_kind = CsvKind::Prices;
  Index n_assets = 50;
  Index n_paths = 250;
  Index lookback = 125;
  double tau = 1.0 / 125.0;
  double gamma = 2.5;
  std::vector<double> confidences = {0.95, 0.05};
  Index rebalance_period = 63;
  std::uint64_t master_seed = 1;
  Index min_history = 125;
  double periods_per_year = 252.0;

  void validate() const;
};

nlohmann::json stage2_config_to_json(const Stage2Config& cfg);
Stage2Config stage2_config_from_json(const nlohmann::json& j);

// Walk-forward backtest on an already-ingested panel. Each path draws its own
// universe subset; the benchmark and every methodology trade the same dates on
// estimates from the trailing window alone.
RunReport run_stage2(const Stage2Config& cfg, const ReturnsPanel& panel, unsigned n_threads = 1,
                     StageTrace* trace = nullptr);

// Loads cfg.universe_csv first (drops recorded in the report diagnostics).
RunReport run_stage2(const Stage2Config& cfg, unsigned n_threads = 1,
                     StageTrace* trace = nullptr);

}  // namespace gwb
