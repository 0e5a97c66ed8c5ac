#pragma once

#include <optional>

#include "gwb/views.hpp"

namespace gwb {

enum class UpdateMethod { BL1, BL2, GWB1, GWB2 };

const char* method_name(UpdateMethod m);

// Posterior over asset returns: mean drift and return covariance, ready for an
// optimizer. lambda is set for the barycentric methods only.
struct PosteriorUpdate {
  Vector mean;
  SymMatrix cov;
  UpdateMethod method = UpdateMethod::BL1;
  std::optional<double> lambda;
};

// Reverse-optimized drift implied by holding w_bm at risk aversion gamma:
//   rf * 1 + gamma * cov * w_bm.
Vector equilibrium_drift(const Matrix& cov, const Vector& w_bm, double gamma, double rf);

// Bayesian update with views on expected drifts. The prior drift distribution is
// N(mu, tau * cov); the returned covariance is cov plus the drift posterior
// covariance. Views must target DriftSpace and carry an invertible covariance.
PosteriorUpdate bl1_update(const PriorSpec& prior, const ViewSet& views);

// Bayesian update with views on raw returns: precision-weighted blend of
// N(mu_hat, cov_hat) and the views. Views must target ReturnSpace.
PosteriorUpdate bl2_update(const Vector& mu_hat, const SymMatrix& cov_hat, const ViewSet& views);

// Minimizer of the Wasserstein view-blending objective for a Gaussian prior
// N(mu_p, cov_p), cov_p positive definite. lambda in [0, +inf]; +inf pins the
// pushforward to the views exactly. Closed form, no iteration.
struct GwbCore {
  Vector mean;
  SymMatrix cov;
};
GwbCore gwb_core_update(const Vector& mu_p, const Matrix& cov_p, const ViewSet& views,
                        double lambda);

// Barycentric update with drift-space views: blends N(mu, tau * cov) against the
// views, then returns cov plus the blended drift covariance.
PosteriorUpdate gwb1_update(const PriorSpec& prior, const ViewSet& views, double lambda);

// Barycentric update with return-space views applied to (mu_hat, cov_hat) directly.
PosteriorUpdate gwb2_update(const Vector& mu_hat, const SymMatrix& cov_hat, const ViewSet& views,
                            double lambda);

// Evaluates the blended covariance through the independent closed forms
// (direct geometric-mean route, both product-root variants, and the inverse
// formula) and reports their maximum pairwise relative deviation. Requires
// P^T cov_V P and the prior covariance to be invertible; otherwise the check
// is reported as not applicable.
struct CrossCheckReport {
  bool applicable = false;
  double max_rel_dev = 0.0;
  double inverse_residual = 0.0;
};
CrossCheckReport gwb_cross_checks(const Vector& mu_p, const Matrix& cov_p, const ViewSet& views,
                                  double lambda);

}  // namespace gwb
