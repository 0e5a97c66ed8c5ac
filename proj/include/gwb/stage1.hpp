#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "gwb/sampling.hpp"
#include "gwb/stats.hpp"
#include "gwb/trace.hpp"

namespace gwb {

// Simulated back-validation run. Volatility-like fields (drift_vol, vol_low,
// vol_high) are quoted annualized and divided by sqrt(periods_per_year)
// internally. tau defaults to 1 / lookback when read from JSON.
struct Stage1Config {
  Index n_assets = 50;
  Index n_views = 50;
  Index horizon = 4000;
  Index n_paths = 250;
  Index lookback = 125;
  Index forward = 750;
  double tau = 1.0 / 125.0;
  double gamma = 2.5;
  std::vector<double> confidences = {0.95, 0.05};
  ViewKind views_kind = ViewKind::Correct;
  Index rebalance_period = 63;
  std::uint64_t master_seed = 1;
  double periods_per_year = 252.0;
  double vol_low = 0.10;
  double vol_high = 0.40;
  double drift_vol = 0.08;

  void validate() const;
};

nlohmann::json stage1_config_to_json(const Stage1Config& cfg);
Stage1Config stage1_config_from_json(const nlohmann::json& j);

// Simulates n_paths independent Gaussian markets, walks each with periodic
// rebalances (estimates from the trailing window, views drawn from the forward
// window), allocates with every methodology plus the equal-weight benchmark,
// and aggregates per-path Sharpe ratios into pairwise outperformance tables.
// Deterministic for a fixed master_seed at any thread count.
RunReport run_stage1(const Stage1Config& cfg, unsigned n_threads = 1, StageTrace* trace = nullptr);

}  // namespace gwb
