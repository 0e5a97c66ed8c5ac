#pragma once

#include "gwb/sym_matrix.hpp"

namespace gwb {

// Space a view statement lives in: expected drifts (BL-I / GWB-I inputs) or raw
// returns (BL-II / GWB-II inputs).
enum class ViewTarget { DriftSpace, ReturnSpace };

// A set of linear views: each row of P picks a portfolio, nu holds the stated
// values and cov their uncertainty. confidence is the blending weight t in [0, 1].
struct ViewSet {
  Matrix P;
  Vector nu;
  SymMatrix cov;
  ViewTarget target = ViewTarget::DriftSpace;
  double confidence = 0.5;

  Index n_views() const { return P.rows(); }
  Index n_assets() const { return P.cols(); }
};

// Prior on asset drifts and return covariance. cov must be strictly positive
// definite; tau scales it when the prior acts on drift space.
struct PriorSpec {
  Vector mu;
  SymMatrix cov;
  double tau = 1.0;
  double gamma = 2.5;
  double rf = 0.0;

  Index dim() const { return mu.size(); }
  void validate() const;
};

// Maps confidence t in [0, 1] to the Lagrangian weight lambda = t / (1 - t).
// t = 1 maps to +infinity. Values outside [0, 1] are rejected.
double confidence_to_lambda(double t);

// Inverse map; accepts +infinity.
double lambda_to_confidence(double lambda);

struct ViewCheck {
  // True when P^T cov P is singular (fewer views than assets, rank-deficient P,
  // or degenerate view covariance). Informational: the barycentric update
  // handles this case, the Bayesian ones do not.
  bool lifted_cov_degenerate = false;
};

// Validates shapes, rows, confidence range and PSD-ness against a given asset count.
ViewCheck validate_views(const ViewSet& views, Index n_assets);

}  // namespace gwb
