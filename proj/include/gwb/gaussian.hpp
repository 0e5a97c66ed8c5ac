#pragma once

#include "gwb/sym_matrix.hpp"

namespace gwb {

// Gaussian measure N(mean, cov) on R^dim. Degenerate (singular) covariances are legal.
struct GaussianMeasure {
  Vector mean;
  SymMatrix cov;

  GaussianMeasure(Vector mean_in, SymMatrix cov_in);
  Index dim() const { return mean.size(); }
};

// Image of g under the linear map x -> P x: N(P mean, P cov P^T).
GaussianMeasure pushforward(const GaussianMeasure& g, const Matrix& view_map);

// Squared L2-Wasserstein (Bures) distance between Gaussian measures:
//   ||m1 - m2||^2 + tr(C1 + C2 - 2 (C1^{1/2} C2 C1^{1/2})^{1/2}).
// Valid for degenerate covariances; round-off in the trace term is clipped at zero.
double wasserstein2_sq(const GaussianMeasure& a, const GaussianMeasure& b);

// Objective blending prior fidelity and view fidelity in the Wasserstein geometry:
//   W2^2(candidate, prior) + lambda * W2^2(view_map # candidate, views).
// lambda = 0 ignores views entirely; lambda must be finite and >= 0.
double gwb_lagrangian(const GaussianMeasure& candidate, const GaussianMeasure& prior,
                      const GaussianMeasure& views, const Matrix& view_map, double lambda);

}  // namespace gwb
