#include "gwb/stage2.hpp"

#include <set>
#include <string>
#include <utility>

#include "gwb/errors.hpp"
#include "gwb/estimation.hpp"
#include "gwb/log.hpp"
#include "gwb/mvo.hpp"
#include "gwb/parallel.hpp"
#include "gwb/posterior.hpp"
#include "gwb/rng.hpp"

namespace gwb {

namespace {

struct PathOutput {
  Vector sharpe;
  std::int64_t loaded_covariances = 0;
  std::vector<RebalanceRecord> records;
};

PathOutput run_path(const Stage2Config& cfg, const ReturnsPanel& panel, std::uint64_t seed,
                    std::size_t path_index, const std::vector<double>& lambdas, bool want_trace) {
  const Index lb = cfg.lookback;
  const Index n_methods = 3 + 2 * static_cast<Index>(lambdas.size());

  Rng rng(seed);
  const ReturnsPanel sub = subsample_universe(panel, cfg.n_assets, rng);
  const Index n = sub.n_assets();
  const Index horizon = sub.n_periods();
  const Vector w_bm = Vector::Constant(n, 1.0 / static_cast<double>(n));
  const Matrix view_map = Matrix::Identity(n, n);

  PathOutput out;
  Matrix weights(n_methods, n);
  weights.rowwise() = w_bm.transpose();
  Matrix series(horizon - lb, n_methods);

  for (Index t = lb; t < horizon; ++t) {
    if ((t - lb) % cfg.rebalance_period == 0) {
      try {
        bool loaded = false;
        const SymMatrix cov_hat = ensure_spd(sample_covariance(sub.returns.middleRows(t - lb, lb)),
                                             &loaded);
        out.loaded_covariances += loaded;
        const Vector mu_eq = equilibrium_drift(cov_hat, w_bm, cfg.gamma, 0.0);
        const Vector w_mvol = min_vol_weights(cov_hat, cfg.gamma).w;
        const Vector mu_view = cfg.gamma * (cov_hat.mat() * w_mvol);

        ViewSet views_r;
        views_r.P = view_map;
        views_r.nu = mu_view;
        views_r.cov = cov_hat;
        views_r.target = ViewTarget::ReturnSpace;

        ViewSet views_d = views_r;
        views_d.target = ViewTarget::DriftSpace;

        PriorSpec prior;
        prior.mu = mu_eq;
        prior.cov = cov_hat;
        prior.tau = cfg.tau;
        prior.gamma = cfg.gamma;
        prior.rf = 0.0;

        auto allocate = [&](const Vector& mean, const SymMatrix& cov) {
          return solve_mvo(MvoProblem{mean, cov, cfg.gamma, 0.0}).w;
        };
        {
          const PosteriorUpdate p = bl1_update(prior, views_d);
          weights.row(1) = allocate(p.mean, p.cov).transpose();
        }
        {
          const PosteriorUpdate p = bl2_update(mu_eq, cov_hat, views_r);
          weights.row(2) = allocate(p.mean, p.cov).transpose();
        }
        Index row = 3;
        for (const double lambda : lambdas) {
          const PosteriorUpdate g1 = gwb1_update(prior, views_d, lambda);
          weights.row(row++) = allocate(g1.mean, g1.cov).transpose();
          const PosteriorUpdate g2 = gwb2_update(mu_eq, cov_hat, views_r, lambda);
          weights.row(row++) = allocate(g2.mean, g2.cov).transpose();
        }

        if (want_trace) {
          RebalanceRecord rec;
          rec.period = t;
          rec.mu_eq = mu_eq;
          rec.mu_hat = mu_eq;
          rec.cov_hat = cov_hat.mat();
          rec.view_nu = mu_view;
          rec.view_cov = cov_hat.mat();
          rec.weights = weights;
          out.records.push_back(std::move(rec));
        }
      } catch (const Error& e) {
        fail(e.code(), "path " + std::to_string(path_index) + ", rebalance at " +
                           sub.dates[static_cast<std::size_t>(t)] + ": " + e.what());
      }
    }
    series.row(t - lb) = (weights * sub.returns.row(t).transpose()).transpose();
  }

  out.sharpe.resize(n_methods);
  for (Index m = 0; m < n_methods; ++m)
    out.sharpe[m] = sharpe_ratio(series.col(m), cfg.periods_per_year);
  return out;
}

}  // namespace

void Stage2Config::validate() const {
  if (n_assets < 2) fail(Errc::out_of_range, "n_assets must be at least 2");
  if (n_paths < 2) fail(Errc::out_of_range, "n_paths must be at least 2");
  if (lookback < 2) fail(Errc::out_of_range, "lookback must be at least 2");
  if (!(tau > 0.0) || tau > 1.0) fail(Errc::out_of_range, "tau must be in (0, 1]");
  if (!(gamma > 0.0)) fail(Errc::out_of_range, "gamma must be positive");
  if (confidences.empty()) fail(Errc::out_of_range, "confidences must not be empty");
  for (const double t : confidences)
    if (!(t >= 0.0 && t <= 1.0)) fail(Errc::out_of_range, "confidences must lie in [0, 1]");
  if (rebalance_period < 1) fail(Errc::out_of_range, "rebalance_period must be at least 1");
  if (min_history < lookback)
    fail(Errc::out_of_range, "min_history must be at least the lookback length");
  if (!(periods_per_year > 0.0)) fail(Errc::out_of_range, "periods_per_year must be positive");
}

nlohmann::json stage2_config_to_json(const Stage2Config& cfg) {
  nlohmann::json j;
  j["universe_csv"] = cfg.universe_csv;
  j["csv_kind"] = cfg.csv_kind == CsvKind::Prices ? "prices" : "returns";
  j["n_assets"] = cfg.n_assets;
  j["n_paths"] = cfg.n_paths;
  j["lookback"] = cfg.lookback;
  j["tau"] = cfg.tau;
  j["gamma"] = cfg.gamma;
  j["confidences"] = cfg.confidences;
  j["rebalance_period"] = cfg.rebalance_period;
  j["master_seed"] = cfg.master_seed;
  j["min_history"] = cfg.min_history;
  j["periods_per_year"] = cfg.periods_per_year;
  return j;
}

Stage2Config stage2_config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "universe_csv", "csv_kind", "n_assets",     "n_paths",          "lookback",
      "tau",          "gamma",    "confidences",  "rebalance_period", "master_seed",
      "min_history",  "periods_per_year"};
  if (!j.is_object()) fail(Errc::parse_error, "backtest config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      fail(Errc::parse_error, "unknown field '" + it.key() + "' in backtest config");

  Stage2Config cfg;
  auto index_field = [&](const char* field, Index fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number_integer() && !j.at(field).is_number_unsigned())
      fail(Errc::parse_error, std::string("field '") + field + "' must be an integer");
    return j.at(field).get<Index>();
  };
  auto double_field = [&](const char* field, double fallback) {
    if (!j.contains(field)) return fallback;
    if (!j.at(field).is_number())
      fail(Errc::parse_error, std::string("field '") + field + "' must be a number");
    return j.at(field).get<double>();
  };

  if (j.contains("universe_csv")) {
    if (!j.at("universe_csv").is_string())
      fail(Errc::parse_error, "field 'universe_csv' must be a string");
    cfg.universe_csv = j.at("universe_csv").get<std::string>();
  }
  if (j.contains("csv_kind")) {
    if (!j.at("csv_kind").is_string())
      fail(Errc::parse_error, "field 'csv_kind' must be 'prices' or 'returns'");
    const std::string kind = j.at("csv_kind").get<std::string>();
    if (kind == "prices")
      cfg.csv_kind = CsvKind::Prices;
    else if (kind == "returns")
      cfg.csv_kind = CsvKind::Returns;
    else
      fail(Errc::parse_error, "field 'csv_kind' must be 'prices' or 'returns', got '" + kind +
                                  "'");
  }
  cfg.n_assets = index_field("n_assets", cfg.n_assets);
  cfg.n_paths = index_field("n_paths", cfg.n_paths);
  cfg.lookback = index_field("lookback", cfg.lookback);
  cfg.gamma = double_field("gamma", cfg.gamma);
  if (j.contains("confidences")) {
    if (!j.at("confidences").is_array() || j.at("confidences").empty())
      fail(Errc::parse_error, "field 'confidences' must be a non-empty array");
    cfg.confidences.clear();
    for (const auto& t : j.at("confidences")) {
      if (!t.is_number()) fail(Errc::parse_error, "field 'confidences' must hold numbers");
      cfg.confidences.push_back(t.get<double>());
    }
  }
  cfg.rebalance_period = index_field("rebalance_period", cfg.rebalance_period);
  if (j.contains("master_seed")) {
    if (!j.at("master_seed").is_number_integer() && !j.at("master_seed").is_number_unsigned())
      fail(Errc::parse_error, "field 'master_seed' must be an integer");
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  cfg.min_history = index_field("min_history", std::max(cfg.min_history, cfg.lookback));
  cfg.periods_per_year = double_field("periods_per_year", cfg.periods_per_year);
  cfg.tau = double_field("tau", 1.0 / static_cast<double>(std::max<Index>(cfg.lookback, 1)));
  cfg.validate();
  return cfg;
}

RunReport run_stage2(const Stage2Config& cfg, const ReturnsPanel& panel, unsigned n_threads,
                     StageTrace* trace) {
  cfg.validate();
  if (panel.n_assets() <= cfg.n_assets)
    fail(Errc::too_few_assets, "universe holds " + std::to_string(panel.n_assets()) +
                                   " tickers, need more than " + std::to_string(cfg.n_assets));
  if (panel.n_periods() < cfg.lookback + 2)
    fail(Errc::too_short, "panel has " + std::to_string(panel.n_periods()) +
                              " periods, need at least lookback + 2");

  const auto labels = method_labels(cfg.confidences);
  std::vector<double> lambdas;
  lambdas.reserve(cfg.confidences.size());
  for (const double t : cfg.confidences) lambdas.push_back(confidence_to_lambda(t));

  const auto n_paths = static_cast<std::size_t>(cfg.n_paths);
  std::vector<std::uint64_t> seeds(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) seeds[i] = Rng::derive(cfg.master_seed, i);

  std::vector<PathOutput> outputs(n_paths);
  parallel_for(n_paths, n_threads, [&](std::size_t i) {
    outputs[i] = run_path(cfg, panel, seeds[i], i, lambdas, trace != nullptr);
  });

  Matrix sharpe(cfg.n_paths, static_cast<Index>(labels.size()));
  std::int64_t loaded = 0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    sharpe.row(static_cast<Index>(i)) = outputs[i].sharpe.transpose();
    loaded += outputs[i].loaded_covariances;
  }

  RunReport report = build_report(labels, std::move(sharpe), stage2_config_to_json(cfg), seeds);
  report.diagnostics["loaded_covariances"] = loaded;
  if (trace) {
    trace->methods = labels;
    trace->paths.clear();
    trace->paths.reserve(n_paths);
    for (auto& o : outputs) trace->paths.push_back(std::move(o.records));
  }
  return report;
}

RunReport run_stage2(const Stage2Config& cfg, unsigned n_threads, StageTrace* trace) {
  cfg.validate();
  if (cfg.universe_csv.empty())
    fail(Errc::out_of_range, "field 'universe_csv' must name the input file");
  LoadReport drops;
  const ReturnsPanel panel =
      load_returns_csv(cfg.universe_csv, cfg.csv_kind, cfg.min_history, &drops);
  RunReport report = run_stage2(cfg, panel, n_threads, trace);
  report.diagnostics["dropped_tickers"] = drops.dropped_tickers;
  report.diagnostics["dropped_rows"] = drops.dropped_rows;
  return report;
}

}  // namespace gwb
