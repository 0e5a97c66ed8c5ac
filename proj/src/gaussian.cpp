#include "gwb/gaussian.hpp"

#include <cmath>
#include <string>

namespace gwb {

GaussianMeasure::GaussianMeasure(Vector mean_in, SymMatrix cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (mean.size() == 0) fail(Errc::dimension_mismatch, "GaussianMeasure: empty mean");
  if (cov.dim() != mean.size())
    fail(Errc::dimension_mismatch,
         "GaussianMeasure: mean has " + std::to_string(mean.size()) + " entries but cov is " +
             std::to_string(cov.dim()) + "x" + std::to_string(cov.dim()));
  if (!mean.allFinite()) fail(Errc::out_of_range, "GaussianMeasure: mean must be finite");
}

GaussianMeasure pushforward(const GaussianMeasure& g, const Matrix& view_map) {
  if (view_map.cols() != g.dim())
    fail(Errc::dimension_mismatch, "pushforward: map has " + std::to_string(view_map.cols()) +
                                       " columns, measure dimension is " +
                                       std::to_string(g.dim()));
  if (view_map.rows() == 0) fail(Errc::dimension_mismatch, "pushforward: map has no rows");
  Matrix cov = view_map * g.cov.mat() * view_map.transpose();
  cov = clip_to_psd(((cov + cov.transpose()) / 2).eval());
  return GaussianMeasure(view_map * g.mean, SymMatrix::unchecked(std::move(cov)));
}

double wasserstein2_sq(const GaussianMeasure& a, const GaussianMeasure& b) {
  if (a.dim() != b.dim())
    fail(Errc::dimension_mismatch, "wasserstein2_sq: dimensions " + std::to_string(a.dim()) +
                                       " and " + std::to_string(b.dim()) + " differ");
  const double mean_term = (a.mean - b.mean).squaredNorm();
  // tr((B^1/2 A B^1/2)^1/2) equals the nuclear norm of A^1/2 B^1/2; the SVD
  // route never squares small eigenvalues, keeping the value symmetric in its
  // arguments to machine precision even for rank-deficient covariances.
  const Matrix root_a = sym_sqrt(a.cov.mat());
  const Matrix root_b = sym_sqrt(b.cov.mat());
  Eigen::JacobiSVD<Matrix> svd(root_a * root_b);
  const double trace_term =
      a.cov.mat().trace() + b.cov.mat().trace() - 2.0 * svd.singularValues().sum();
  return mean_term + std::max(trace_term, 0.0);
}

double gwb_lagrangian(const GaussianMeasure& candidate, const GaussianMeasure& prior,
                      const GaussianMeasure& views, const Matrix& view_map, double lambda) {
  if (std::isnan(lambda) || lambda < 0.0 || std::isinf(lambda))
    fail(Errc::negative_lambda, "gwb_lagrangian: lambda must be finite and >= 0");
  if (candidate.dim() != prior.dim())
    fail(Errc::dimension_mismatch, "gwb_lagrangian: candidate and prior dimensions differ");
  if (view_map.cols() != candidate.dim() || view_map.rows() != views.dim())
    fail(Errc::dimension_mismatch, "gwb_lagrangian: view map is " +
                                       std::to_string(view_map.rows()) + "x" +
                                       std::to_string(view_map.cols()) + ", expected " +
                                       std::to_string(views.dim()) + "x" +
                                       std::to_string(candidate.dim()));
  const double fidelity = wasserstein2_sq(candidate, prior);
  if (lambda == 0.0) return fidelity;
  return fidelity + lambda * wasserstein2_sq(pushforward(candidate, view_map), views);
}

}  // namespace gwb
