#include "gwb/stage1.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <utility>

#include "gwb/errors.hpp"
#include "gwb/estimation.hpp"
#include "gwb/log.hpp"
#include "gwb/mvo.hpp"
#include "gwb/parallel.hpp"
#include "gwb/posterior.hpp"

namespace gwb {

namespace {

std::string format_confidence(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

void check_known_keys(const nlohmann::json& j, const std::set<std::string>& known,
                      const char* what) {
  if (!j.is_object()) fail(Errc::parse_error, std::string(what) + " config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      fail(Errc::parse_error, std::string("unknown field '") + it.key() + "' in " + what +
                                  " config");
}

Index index_field(const nlohmann::json& j, const char* field, Index fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number_integer() && !j.at(field).is_number_unsigned())
    fail(Errc::parse_error, std::string("field '") + field + "' must be an integer");
  return j.at(field).get<Index>();
}

double double_field(const nlohmann::json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number())
    fail(Errc::parse_error, std::string("field '") + field + "' must be a number");
  return j.at(field).get<double>();
}

struct PathOutput {
  Vector sharpe;
  std::int64_t held = 0;
  std::int64_t unsampled = 0;
  std::vector<RebalanceRecord> records;
};

PathOutput run_path(const Stage1Config& cfg, std::uint64_t seed, std::size_t path_index,
                    const std::vector<double>& lambdas, bool want_trace) {
  const Index n = cfg.n_assets;
  const Index nv = cfg.n_views;
  const Index horizon = cfg.horizon;
  const Index lb = cfg.lookback;
  const double per_period = std::sqrt(cfg.periods_per_year);
  const Index n_methods = 3 + 2 * static_cast<Index>(lambdas.size());

  Rng rng(seed);

  Vector mu_sim(n);
  for (Index i = 0; i < n; ++i) mu_sim[i] = rng.normal() * cfg.drift_vol / per_period;
  Vector vols(n);
  const double log_lo = std::log(cfg.vol_low);
  const double log_hi = std::log(cfg.vol_high);
  for (Index i = 0; i < n; ++i) vols[i] = std::exp(rng.uniform(log_lo, log_hi)) / per_period;
  const Matrix corr = random_correlation(n, rng);
  const Matrix cov_sim = vols.asDiagonal() * corr * vols.asDiagonal();
  const Matrix returns = sample_mvn(mu_sim, cov_sim, horizon, rng);

  const Matrix view_map = Matrix::Identity(nv, n);
  const Vector w_bm = Vector::Constant(n, 1.0 / static_cast<double>(n));
  const double sign = cfg.views_kind == ViewKind::Correct      ? 1.0
                      : cfg.views_kind == ViewKind::Ambiguous ? 0.0
                                                              : -1.0;
  const double sqrt_tau = std::sqrt(cfg.tau);

  PathOutput out;
  Matrix weights(n_methods, n);
  weights.rowwise() = w_bm.transpose();
  Matrix series(horizon - lb, n_methods);

  for (Index t = lb; t < horizon; ++t) {
    if ((t - lb) % cfg.rebalance_period == 0) {
      try {
        const auto trailing = returns.middleRows(t - lb, lb);
        const SymMatrix cov_hat = ensure_spd(sample_covariance(trailing));
        // Both target spaces take the reverse-optimized equilibrium drift as
        // their prior mean; the trailing window contributes the covariance only.
        const Vector mu_eq = equilibrium_drift(cov_hat, w_bm, cfg.gamma, 0.0);

        const Index fwd_len = std::min(cfg.forward, horizon - t);
        bool usable = false;
        bool unsampled = false;
        Vector nu_r;
        Matrix cov_v;
        Vector center = Vector::Zero(nv);
        if (fwd_len >= 2) {
          const auto fwd = returns.middleRows(t, fwd_len);
          const Vector mu_fwd = sample_mean(fwd);
          const Matrix cov_fwd = clip_to_psd(sample_covariance(fwd));
          center = sign * (view_map * mu_fwd);
          if (fwd_len >= nv) {
            const GeneratedViews gen = generate_views(cfg.views_kind, view_map, mu_fwd, cov_fwd,
                                                      static_cast<int>(fwd_len), rng);
            nu_r = gen.nu;
            cov_v = gen.cov;
          } else {
            // Wishart degrees-of-freedom floor: keep the lifted forward
            // covariance unsampled.
            unsampled = true;
            ++out.unsampled;
            cov_v = clip_to_psd(view_map * cov_fwd * view_map.transpose());
          }
          usable = spectral_rank(cov_v) == nv;
          if (usable && unsampled)
            nu_r = center + sample_mvn(Vector::Zero(nv), cov_v, 1, rng).row(0).transpose();
        }

        if (usable) {
          ViewSet views_r;
          views_r.P = view_map;
          views_r.nu = nu_r;
          views_r.cov = SymMatrix::unchecked(cov_v);
          views_r.target = ViewTarget::ReturnSpace;

          // Drift-space twin of the same draw: scaling a Wishart by tau equals
          // sampling with a tau-scaled scale matrix, and the blur shrinks with it.
          ViewSet views_d;
          views_d.P = view_map;
          views_d.nu = center + sqrt_tau * (nu_r - center);
          views_d.cov = SymMatrix::unchecked(cfg.tau * cov_v);
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
        } else {
          ++out.held;
          log::info("path " + std::to_string(path_index) + ", period " + std::to_string(t) +
                    ": view covariance rank-deficient, holding weights");
        }

        if (want_trace) {
          RebalanceRecord rec;
          rec.period = t;
          rec.mu_eq = mu_eq;
          rec.mu_hat = mu_eq;
          rec.cov_hat = cov_hat.mat();
          if (usable) {
            rec.view_nu = nu_r;
            rec.view_cov = cov_v;
          }
          rec.weights = weights;
          rec.held = !usable;
          rec.unsampled = unsampled;
          out.records.push_back(std::move(rec));
        }
      } catch (const Error& e) {
        fail(e.code(), "path " + std::to_string(path_index) + ", rebalance at period " +
                           std::to_string(t) + ": " + e.what());
      }
    }
    series.row(t - lb) = (weights * returns.row(t).transpose()).transpose();
  }

  out.sharpe.resize(n_methods);
  for (Index m = 0; m < n_methods; ++m)
    out.sharpe[m] = sharpe_ratio(series.col(m), cfg.periods_per_year);
  return out;
}

}  // namespace

std::vector<std::string> method_labels(const std::vector<double>& confidences) {
  std::vector<std::string> labels = {"BM", "BL1", "BL2"};
  for (const double t : confidences) {
    labels.push_back("GWB1_t" + format_confidence(t));
    labels.push_back("GWB2_t" + format_confidence(t));
  }
  return labels;
}

void Stage1Config::validate() const {
  if (n_assets < 2) fail(Errc::out_of_range, "n_assets must be at least 2");
  if (n_views < 1 || n_views > n_assets)
    fail(Errc::out_of_range, "n_views must be between 1 and n_assets");
  if (n_paths < 2) fail(Errc::out_of_range, "n_paths must be at least 2");
  if (lookback < 2) fail(Errc::out_of_range, "lookback must be at least 2");
  if (forward < n_views) fail(Errc::out_of_range, "forward window must cover n_views periods");
  if (lookback + forward > horizon)
    fail(Errc::out_of_range, "lookback + forward must not exceed horizon");
  if (!(tau > 0.0) || tau > 1.0) fail(Errc::out_of_range, "tau must be in (0, 1]");
  if (!(gamma > 0.0)) fail(Errc::out_of_range, "gamma must be positive");
  if (confidences.empty()) fail(Errc::out_of_range, "confidences must not be empty");
  for (const double t : confidences)
    if (!(t >= 0.0 && t <= 1.0)) fail(Errc::out_of_range, "confidences must lie in [0, 1]");
  if (rebalance_period < 1) fail(Errc::out_of_range, "rebalance_period must be at least 1");
  if (!(periods_per_year > 0.0)) fail(Errc::out_of_range, "periods_per_year must be positive");
  if (!(vol_low > 0.0) || vol_high < vol_low)
    fail(Errc::out_of_range, "volatility range must satisfy 0 < vol_low <= vol_high");
  if (!(drift_vol >= 0.0)) fail(Errc::out_of_range, "drift_vol must be nonnegative");
}

nlohmann::json stage1_config_to_json(const Stage1Config& cfg) {
  nlohmann::json j;
  j["n_assets"] = cfg.n_assets;
  j["n_views"] = cfg.n_views;
  j["horizon"] = cfg.horizon;
  j["n_paths"] = cfg.n_paths;
  j["lookback"] = cfg.lookback;
  j["forward"] = cfg.forward;
  j["tau"] = cfg.tau;
  j["gamma"] = cfg.gamma;
  j["confidences"] = cfg.confidences;
  j["views_kind"] = view_kind_name(cfg.views_kind);
  j["rebalance_period"] = cfg.rebalance_period;
  j["master_seed"] = cfg.master_seed;
  j["periods_per_year"] = cfg.periods_per_year;
  j["vol_low"] = cfg.vol_low;
  j["vol_high"] = cfg.vol_high;
  j["drift_vol"] = cfg.drift_vol;
  return j;
}

Stage1Config stage1_config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "n_assets", "n_views",          "horizon",     "n_paths",  "lookback",
      "forward",  "tau",              "gamma",       "confidences", "views_kind",
      "rebalance_period", "master_seed", "periods_per_year", "vol_low", "vol_high",
      "drift_vol"};
  check_known_keys(j, known, "simulation");

  Stage1Config cfg;
  cfg.n_assets = index_field(j, "n_assets", cfg.n_assets);
  cfg.n_views = index_field(j, "n_views", j.contains("n_assets") ? cfg.n_assets : cfg.n_views);
  cfg.horizon = index_field(j, "horizon", cfg.horizon);
  cfg.n_paths = index_field(j, "n_paths", cfg.n_paths);
  cfg.lookback = index_field(j, "lookback", cfg.lookback);
  cfg.forward = index_field(j, "forward", cfg.forward);
  cfg.gamma = double_field(j, "gamma", cfg.gamma);
  if (j.contains("confidences")) {
    if (!j.at("confidences").is_array() || j.at("confidences").empty())
      fail(Errc::parse_error, "field 'confidences' must be a non-empty array");
    cfg.confidences.clear();
    for (const auto& t : j.at("confidences")) {
      if (!t.is_number()) fail(Errc::parse_error, "field 'confidences' must hold numbers");
      cfg.confidences.push_back(t.get<double>());
    }
  }
  if (j.contains("views_kind")) {
    if (!j.at("views_kind").is_string())
      fail(Errc::parse_error, "field 'views_kind' must be a string");
    cfg.views_kind = view_kind_from_name(j.at("views_kind").get<std::string>());
  }
  cfg.rebalance_period = index_field(j, "rebalance_period", cfg.rebalance_period);
  if (j.contains("master_seed")) {
    if (!j.at("master_seed").is_number_integer() && !j.at("master_seed").is_number_unsigned())
      fail(Errc::parse_error, "field 'master_seed' must be an integer");
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  cfg.periods_per_year = double_field(j, "periods_per_year", cfg.periods_per_year);
  cfg.vol_low = double_field(j, "vol_low", cfg.vol_low);
  cfg.vol_high = double_field(j, "vol_high", cfg.vol_high);
  cfg.drift_vol = double_field(j, "drift_vol", cfg.drift_vol);
  cfg.tau = double_field(j, "tau", 1.0 / static_cast<double>(std::max<Index>(cfg.lookback, 1)));
  cfg.validate();
  return cfg;
}

RunReport run_stage1(const Stage1Config& cfg, unsigned n_threads, StageTrace* trace) {
  cfg.validate();
  const auto labels = method_labels(cfg.confidences);
  std::vector<double> lambdas;
  lambdas.reserve(cfg.confidences.size());
  for (const double t : cfg.confidences) lambdas.push_back(confidence_to_lambda(t));

  const auto n_paths = static_cast<std::size_t>(cfg.n_paths);
  std::vector<std::uint64_t> seeds(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) seeds[i] = Rng::derive(cfg.master_seed, i);

  std::vector<PathOutput> outputs(n_paths);
  parallel_for(n_paths, n_threads, [&](std::size_t i) {
    outputs[i] = run_path(cfg, seeds[i], i, lambdas, trace != nullptr);
  });

  Matrix sharpe(cfg.n_paths, static_cast<Index>(labels.size()));
  std::int64_t held = 0;
  std::int64_t unsampled = 0;
  for (std::size_t i = 0; i < n_paths; ++i) {
    sharpe.row(static_cast<Index>(i)) = outputs[i].sharpe.transpose();
    held += outputs[i].held;
    unsampled += outputs[i].unsampled;
  }

  RunReport report = build_report(labels, std::move(sharpe), stage1_config_to_json(cfg), seeds);
  report.diagnostics["held_rebalances"] = held;
  report.diagnostics["unsampled_view_covariances"] = unsampled;
  if (trace) {
    trace->methods = labels;
    trace->paths.clear();
    trace->paths.reserve(n_paths);
    for (auto& o : outputs) trace->paths.push_back(std::move(o.records));
  }
  return report;
}

}  // namespace gwb
