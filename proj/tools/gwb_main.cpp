#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "gwb/errors.hpp"
#include "gwb/json_io.hpp"
#include "gwb/log.hpp"
#include "gwb/mvo.hpp"
#include "gwb/posterior.hpp"
#include "gwb/selftest.hpp"
#include "gwb/stage1.hpp"
#include "gwb/stage2.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

std::string output_prefix(const std::string& path) {
  const std::string suffix = ".json";
  if (path.size() > suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(),
                                                  suffix) == 0)
    return path.substr(0, path.size() - suffix.size());
  return path;
}

gwb::Vector posterior_mean(const gwb::Json& j) {
  if (j.contains("mean")) return gwb::vector_from_json(j.at("mean"), "mean");
  if (j.contains("mu")) return gwb::vector_from_json(j.at("mu"), "mu");
  gwb::fail(gwb::Errc::parse_error, "input needs a 'mean' (or 'mu') field");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian view blending and long-only mean-variance allocation"};
  app.require_subcommand(1);

  std::string prior_path;
  std::string views_path;
  std::string in_path;
  std::string out_path;
  std::string data_path;
  std::string config_path;
  std::string method;
  std::string format = "csv";
  double confidence = 0.5;
  double tau = 0.0;
  double gamma = 2.5;
  double rf = 0.0;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  auto* update = app.add_subcommand("update", "Blend a prior file with a views file");
  update->add_option("--prior", prior_path, "Prior JSON (mu, cov, tau, gamma, rf)")->required();
  update->add_option("--views", views_path, "Views JSON (target, P, nu, covV)")->required();
  auto* method_opt = update->add_option("--method", method, "Methodology")
                         ->required()
                         ->check(CLI::IsMember({"bl1", "bl2", "gwb1", "gwb2"}));
  auto* conf_opt = update->add_option("--confidence", confidence, "Blend weight t in [0, 1]")
                       ->check(CLI::Range(0.0, 1.0));
  auto* tau_opt = update->add_option("--tau", tau, "Prior covariance scale override");
  auto* gamma_opt = update->add_option("--gamma", gamma, "Risk aversion override");
  update->add_option("--out", out_path, "Posterior JSON output path")->required();

  auto* allocate = app.add_subcommand("allocate", "Long-only mean-variance weights");
  allocate->add_option("--in", in_path, "Posterior or prior JSON")->required();
  auto* alloc_gamma = allocate->add_option("--gamma", gamma, "Risk aversion");
  allocate->add_option("--rf", rf, "Risk-free rate");
  allocate->add_option("--out", out_path, "Weights JSON output path")->required();

  auto* simulate = app.add_subcommand("simulate", "Simulated back-validation study");
  simulate->add_option("--config", config_path, "Run configuration JSON")->required();
  simulate->add_option("--out", out_path, "Report JSON output path")->required();
  auto* sim_seed = simulate->add_option("--seed", seed, "Master seed override");
  simulate->add_option("--threads", threads, "Worker count (0 = logical cores)");

  auto* backtest = app.add_subcommand("backtest", "Walk-forward historical backtest");
  backtest->add_option("--config", config_path, "Run configuration JSON")->required();
  backtest->add_option("--data", data_path, "Universe CSV (overrides config)");
  backtest->add_option("--out", out_path, "Report JSON output path")->required();
  auto* bt_seed = backtest->add_option("--seed", seed, "Master seed override");
  backtest->add_option("--threads", threads, "Worker count (0 = logical cores)");

  auto* report = app.add_subcommand("report", "Re-emit a stored report");
  report->add_option("--in", in_path, "Report JSON")->required();
  report->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  auto* report_out = report->add_option("--out", out_path, "Output prefix");

  auto* selftest = app.add_subcommand("selftest", "Built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*update) {
      gwb::PriorSpec prior = gwb::prior_from_json(gwb::read_json_file(prior_path));
      if (*tau_opt) prior.tau = tau;
      if (*gamma_opt) prior.gamma = gamma;
      prior.validate();
      gwb::ViewSet views = gwb::views_from_json(gwb::read_json_file(views_path));
      if (*conf_opt) views.confidence = confidence;
      (void)method_opt;

      gwb::PosteriorUpdate post;
      if (method == "bl1") {
        post = gwb::bl1_update(prior, views);
      } else if (method == "bl2") {
        post = gwb::bl2_update(prior.mu, prior.cov, views);
      } else {
        const double lambda = gwb::confidence_to_lambda(views.confidence);
        post = method == "gwb1" ? gwb::gwb1_update(prior, views, lambda)
                                : gwb::gwb2_update(prior.mu, prior.cov, views, lambda);
      }
      gwb::write_text_file(out_path, gwb::canonical_dump(gwb::posterior_to_json(post), 2));
      return 0;
    }

    if (*allocate) {
      const gwb::Json in = gwb::read_json_file(in_path);
      const gwb::Vector mean = posterior_mean(in);
      if (!in.contains("cov")) gwb::fail(gwb::Errc::parse_error, "input needs a 'cov' field");
      const gwb::SymMatrix cov =
          gwb::SymMatrix::covariance(gwb::matrix_from_json(in.at("cov"), "cov"));
      if (!*alloc_gamma && in.contains("gamma") && in.at("gamma").is_number())
        gamma = in.at("gamma").get<double>();
      gwb::KktInfo info;
      const gwb::Weights w = gwb::solve_mvo(gwb::MvoProblem{mean, cov, gamma, rf}, &info);
      gwb::Json out;
      out["weights"] = gwb::vector_to_json(w.w);
      out["gamma"] = gamma;
      out["rf"] = rf;
      out["kkt"]["stationarity"] = info.stationarity;
      out["kkt"]["dual_feasibility"] = info.dual_feasibility;
      out["kkt"]["complementarity"] = info.complementarity;
      out["kkt"]["iterations"] = info.iterations;
      gwb::write_text_file(out_path, gwb::canonical_dump(out, 2));
      return 0;
    }

    if (*simulate) {
      gwb::Stage1Config cfg = gwb::stage1_config_from_json(gwb::read_json_file(config_path));
      if (*sim_seed) cfg.master_seed = seed;
      const gwb::RunReport r = gwb::run_stage1(cfg, threads);
      gwb::write_text_file(out_path, gwb::canonical_dump(gwb::report_to_json(r), 2));
      return 0;
    }

    if (*backtest) {
      gwb::Stage2Config cfg = gwb::stage2_config_from_json(gwb::read_json_file(config_path));
      if (!data_path.empty()) cfg.universe_csv = data_path;
      if (*bt_seed) cfg.master_seed = seed;
      const gwb::RunReport r = gwb::run_stage2(cfg, threads);
      gwb::write_text_file(out_path, gwb::canonical_dump(gwb::report_to_json(r), 2));
      return 0;
    }

    if (*report) {
      const gwb::RunReport r = gwb::report_from_json(gwb::read_json_file(in_path));
      const std::string prefix = *report_out ? out_path : output_prefix(in_path);
      const auto files = gwb::emit_report(
          r, prefix, format == "json" ? gwb::ReportFormat::Json : gwb::ReportFormat::Csv);
      for (const auto& f : files) std::printf("%s\n", f.c_str());
      return 0;
    }

    if (*selftest) {
      const auto results = gwb::run_selftest();
      for (const auto& r : results) {
        if (r.passed)
          std::printf("ok %s\n", r.name.c_str());
        else
          std::printf("FAIL %s: %s\n", r.name.c_str(), r.detail.c_str());
      }
      return gwb::all_passed(results) ? 0 : kExitRuntime;
    }
  } catch (const gwb::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const bool validation =
        e.code() == gwb::Errc::parse_error || e.code() == gwb::Errc::out_of_range;
    return validation ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
