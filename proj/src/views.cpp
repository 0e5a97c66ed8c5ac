#include "gwb/views.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gwb {

void PriorSpec::validate() const {
  if (mu.size() == 0) fail(Errc::dimension_mismatch, "PriorSpec: empty drift vector");
  if (cov.dim() != mu.size())
    fail(Errc::dimension_mismatch, "PriorSpec: drift has " + std::to_string(mu.size()) +
                                       " entries but cov is " + std::to_string(cov.dim()) + "x" +
                                       std::to_string(cov.dim()));
  if (!mu.allFinite()) fail(Errc::out_of_range, "PriorSpec: drift must be finite");
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov.mat());
  const double max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
  if (max_abs <= 0.0 || es.eigenvalues().minCoeff() <= default_rank_tol(max_abs, cov.dim()))
    fail(Errc::not_psd, "PriorSpec: cov must be strictly positive definite");
  if (!(tau > 0.0) || tau > 1.0)
    fail(Errc::out_of_range, "PriorSpec: tau must lie in (0, 1], got " + std::to_string(tau));
  if (!(gamma > 0.0))
    fail(Errc::out_of_range, "PriorSpec: gamma must be positive, got " + std::to_string(gamma));
  if (!std::isfinite(rf)) fail(Errc::out_of_range, "PriorSpec: rf must be finite");
}

double confidence_to_lambda(double t) {
  if (std::isnan(t) || t < 0.0 || t > 1.0)
    fail(Errc::out_of_range, "confidence must lie in [0, 1], got " + std::to_string(t));
  if (t == 1.0) return std::numeric_limits<double>::infinity();
  return t / (1.0 - t);
}

double lambda_to_confidence(double lambda) {
  if (std::isnan(lambda) || lambda < 0.0)
    fail(Errc::negative_lambda, "lambda must be >= 0, got " + std::to_string(lambda));
  if (std::isinf(lambda)) return 1.0;
  return lambda / (1.0 + lambda);
}

ViewCheck validate_views(const ViewSet& views, Index n_assets) {
  if (views.n_views() < 1) fail(Errc::dimension_mismatch, "ViewSet: needs at least one view row");
  if (views.P.cols() != n_assets)
    fail(Errc::dimension_mismatch, "ViewSet: P has " + std::to_string(views.P.cols()) +
                                       " columns, expected " + std::to_string(n_assets));
  if (views.nu.size() != views.n_views())
    fail(Errc::length_mismatch, "ViewSet: nu has " + std::to_string(views.nu.size()) +
                                    " entries for " + std::to_string(views.n_views()) + " views");
  if (views.cov.dim() != views.n_views())
    fail(Errc::dimension_mismatch, "ViewSet: cov is " + std::to_string(views.cov.dim()) + "x" +
                                       std::to_string(views.cov.dim()) + " for " +
                                       std::to_string(views.n_views()) + " views");
  if (!views.nu.allFinite()) fail(Errc::out_of_range, "ViewSet: nu must be finite");
  if (!views.P.allFinite()) fail(Errc::out_of_range, "ViewSet: P must be finite");
  for (Index i = 0; i < views.n_views(); ++i) {
    if (views.P.row(i).cwiseAbs().maxCoeff() == 0.0)
      fail(Errc::empty_view_row, "ViewSet: view row " + std::to_string(i) + " is all zero");
  }
  if (std::isnan(views.confidence) || views.confidence < 0.0 || views.confidence > 1.0)
    fail(Errc::out_of_range,
         "ViewSet: confidence must lie in [0, 1], got " + std::to_string(views.confidence));
  Eigen::SelfAdjointEigenSolver<Matrix> es(views.cov.mat());
  const double max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() < -kPsdNoiseTol * max_abs)
    fail(Errc::not_psd, "ViewSet: cov has an eigenvalue below the PSD noise tolerance");

  ViewCheck check;
  Matrix lifted = views.P.transpose() * views.cov.mat() * views.P;
  lifted = ((lifted + lifted.transpose()) / 2).eval();
  check.lifted_cov_degenerate = spectral_rank(lifted) < n_assets;
  return check;
}

}  // namespace gwb
