#include "gwb/selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "gwb/gaussian.hpp"
#include "gwb/json_io.hpp"
#include "gwb/matrix_ops.hpp"
#include "gwb/mvo.hpp"
#include "gwb/posterior.hpp"
#include "gwb/sampling.hpp"

namespace gwb {

namespace {

void check(std::vector<SelfTestResult>& out, const std::string& name,
           const std::function<std::string()>& body) {
  SelfTestResult r;
  r.name = name;
  try {
    r.detail = body();
    r.passed = r.detail.empty();
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  out.push_back(std::move(r));
}

std::string expect(bool ok, const std::string& detail) { return ok ? std::string() : detail; }

Matrix fixture_cov() {
  Matrix cov(3, 3);
  cov << 0.040, 0.010, 0.000,
         0.010, 0.090, 0.020,
         0.000, 0.020, 0.160;
  return cov;
}

Vector fixture_mu() {
  Vector mu(3);
  mu << 0.02, 0.05, 0.08;
  return mu;
}

ViewSet fixture_views(ViewTarget target) {
  ViewSet v;
  v.P = Matrix::Identity(3, 3);
  v.nu = Vector(3);
  v.nu << 0.03, 0.02, 0.10;
  Matrix cov(3, 3);
  cov << 0.020, 0.004, 0.000,
         0.004, 0.030, 0.005,
         0.000, 0.005, 0.050;
  v.cov = SymMatrix::covariance(cov);
  v.target = target;
  return v;
}

}  // namespace

std::vector<SelfTestResult> run_selftest() {
  std::vector<SelfTestResult> results;

  check(results, "prior_preserved_at_zero_confidence", [] {
    const Vector mu = fixture_mu();
    const SymMatrix cov = SymMatrix::covariance(fixture_cov());
    const PosteriorUpdate p = gwb2_update(mu, cov, fixture_views(ViewTarget::ReturnSpace), 0.0);
    if (p.mean != mu) return std::string("posterior mean differs from the prior at lambda 0");
    if (p.cov.mat() != cov.mat())
      return std::string("posterior covariance differs from the prior at lambda 0");
    return std::string();
  });

  check(results, "views_pinned_at_full_confidence", [] {
    const ViewSet views = fixture_views(ViewTarget::ReturnSpace);
    const double lambda = confidence_to_lambda(1.0);
    const PosteriorUpdate p =
        gwb2_update(fixture_mu(), SymMatrix::covariance(fixture_cov()), views, lambda);
    const double mean_err = (p.mean - views.nu).cwiseAbs().maxCoeff();
    const double cov_err = (p.cov.mat() - views.cov.mat()).norm() / views.cov.mat().norm();
    std::ostringstream msg;
    msg << "pin residuals: mean " << mean_err << ", cov " << cov_err;
    return expect(mean_err <= 1e-8 && cov_err <= 1e-8, msg.str());
  });

  check(results, "scalar_bayes_closed_form", [] {
    PriorSpec prior;
    prior.mu = Vector::Constant(1, 0.05);
    prior.cov = SymMatrix::covariance(Matrix::Constant(1, 1, 0.04));
    prior.tau = 0.5;
    ViewSet views;
    views.P = Matrix::Constant(1, 1, 1.0);
    views.nu = Vector::Constant(1, 0.07);
    views.cov = SymMatrix::covariance(Matrix::Constant(1, 1, 0.01));
    views.target = ViewTarget::DriftSpace;
    const PosteriorUpdate p = bl1_update(prior, views);
    const double precision = 1.0 / (prior.tau * 0.04) + 1.0 / 0.01;
    const double mean = (0.05 / (prior.tau * 0.04) + 0.07 / 0.01) / precision;
    const double cov = 0.04 + 1.0 / precision;
    std::ostringstream msg;
    msg << "got (" << p.mean[0] << ", " << p.cov.mat()(0, 0) << "), want (" << mean << ", " << cov
        << ")";
    return expect(std::abs(p.mean[0] - mean) <= 1e-12 && std::abs(p.cov.mat()(0, 0) - cov) <= 1e-12,
                  msg.str());
  });

  check(results, "blend_forms_agree", [] {
    const CrossCheckReport r = gwb_cross_checks(fixture_mu(), fixture_cov(),
                                                fixture_views(ViewTarget::ReturnSpace), 1.0);
    std::ostringstream msg;
    msg << "max relative deviation " << r.max_rel_dev;
    return expect(r.applicable && r.max_rel_dev <= 1e-8, msg.str());
  });

  check(results, "transport_metric_axioms", [] {
    const GaussianMeasure a(fixture_mu(), SymMatrix::covariance(fixture_cov()));
    const ViewSet v = fixture_views(ViewTarget::ReturnSpace);
    const GaussianMeasure b(v.nu, v.cov);
    Vector zero = Vector::Zero(3);
    const GaussianMeasure c(zero, SymMatrix::covariance(0.5 * Matrix::Identity(3, 3)));
    const double dab = wasserstein2_sq(a, b);
    const double dba = wasserstein2_sq(b, a);
    const double daa = wasserstein2_sq(a, a);
    const double triangle = std::sqrt(wasserstein2_sq(a, c)) -
                            (std::sqrt(dab) + std::sqrt(wasserstein2_sq(b, c)));
    std::ostringstream msg;
    msg << "symmetry gap " << std::abs(dab - dba) << ", self-distance " << daa
        << ", triangle excess " << triangle;
    return expect(std::abs(dab - dba) <= 1e-9 * std::max(1.0, dab) && daa <= 1e-12 &&
                      triangle <= 1e-7,
                  msg.str());
  });

  check(results, "pseudo_inverse_conditions", [] {
    Vector u(3);
    u << 1.0, 2.0, 3.0;
    const Matrix a = u * u.transpose();
    const Matrix x = pseudo_inverse(a);
    const double r1 = (a * x * a - a).norm() / a.norm();
    const double r2 = (x * a * x - x).norm() / x.norm();
    std::ostringstream msg;
    msg << "Penrose residuals " << r1 << ", " << r2;
    return expect(r1 <= 1e-9 && r2 <= 1e-9, msg.str());
  });

  check(results, "allocator_certificate", [] {
    Vector drift(2);
    drift << 0.3, 0.1;
    MvoProblem prob{drift, SymMatrix::covariance(Matrix::Identity(2, 2)), 1.0, 0.0};
    KktInfo info;
    const Vector w = solve_mvo(prob, &info).w;
    std::ostringstream msg;
    msg << "weights (" << w[0] << ", " << w[1] << "), stationarity " << info.stationarity;
    return expect(std::abs(w[0] - 0.6) <= 1e-8 && std::abs(w[1] - 0.4) <= 1e-8 &&
                      info.stationarity <= 1e-7 && info.complementarity <= 1e-8,
                  msg.str());
  });

  check(results, "wishart_mean", [] {
    Matrix scale(2, 2);
    scale << 1.0, 0.3, 0.3, 2.0;
    const int df = 8;
    const int draws = 4000;
    Rng rng(99);
    Matrix acc = Matrix::Zero(2, 2);
    for (int i = 0; i < draws; ++i) acc += sample_wishart(df, scale, rng);
    const double err = (acc / (static_cast<double>(df) * draws) - scale).norm();
    std::ostringstream msg;
    msg << "Frobenius error " << err;
    return expect(err <= 0.1, msg.str());
  });

  check(results, "rng_reproducibility", [] {
    Rng a(7);
    Rng b(7);
    for (int i = 0; i < 64; ++i)
      if (a.normal() != b.normal()) return std::string("equal seeds diverged");
    if (Rng::derive(1, 0) == Rng::derive(1, 1) || Rng::derive(1, 0) == Rng::derive(2, 0))
      return std::string("derived seeds collide");
    return std::string();
  });

  check(results, "canonical_json_stable", [] {
    Json j;
    j["b"] = 1.5;
    j["a"] = Json::array({1, 2});
    j["c"]["y"] = 0.1;
    j["c"]["x"] = true;
    const std::string once = canonical_dump(j);
    const std::string twice = canonical_dump(Json::parse(once));
    if (once != twice) return std::string("round trip changed the serialization");
    if (once.find("\"a\"") > once.find("\"b\"")) return std::string("keys are not sorted");
    return std::string();
  });

  check(results, "lagrangian_minimality", [] {
    const Vector mu = fixture_mu();
    const SymMatrix cov = SymMatrix::covariance(fixture_cov());
    const ViewSet v = fixture_views(ViewTarget::ReturnSpace);
    const double lambda = 1.0;
    const PosteriorUpdate p = gwb2_update(mu, cov, v, lambda);
    const GaussianMeasure prior(mu, cov);
    const GaussianMeasure views(v.nu, v.cov);
    const GaussianMeasure blended(p.mean, p.cov);
    const double at_blend = gwb_lagrangian(blended, prior, views, v.P, lambda);
    const double at_prior = gwb_lagrangian(prior, prior, views, v.P, lambda);
    const double at_views = gwb_lagrangian(views, prior, views, v.P, lambda);
    std::ostringstream msg;
    msg << "objective " << at_blend << " vs prior " << at_prior << " and views " << at_views;
    return expect(at_blend <= at_prior + 1e-12 && at_blend <= at_views + 1e-12, msg.str());
  });

  return results;
}

bool all_passed(const std::vector<SelfTestResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace gwb
