#include "gwb/gwb_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gwb/gaussian.hpp"
#include "gwb/rng.hpp"

namespace gwb {

namespace {

// Parameter vector: mean entries followed by the lower triangle of the factor,
// column by column. cov = F F^T keeps every candidate PSD.
struct Packing {
  Index n;
  Index size() const { return n + n * (n + 1) / 2; }

  void unpack(const Vector& theta, Vector* mean, Matrix* factor) const {
    *mean = theta.head(n);
    factor->setZero(n, n);
    Index k = n;
    for (Index j = 0; j < n; ++j)
      for (Index i = j; i < n; ++i) (*factor)(i, j) = theta[k++];
  }

  Vector pack(const Vector& mean, const Matrix& factor) const {
    Vector theta(size());
    theta.head(n) = mean;
    Index k = n;
    for (Index j = 0; j < n; ++j)
      for (Index i = j; i < n; ++i) theta[k++] = factor(i, j);
    return theta;
  }
};

struct Objective {
  const GaussianMeasure* prior;
  const GaussianMeasure* views;
  const Matrix* view_map;
  double lambda;
  Packing packing;

  double operator()(const Vector& theta) const {
    Vector mean;
    Matrix factor;
    packing.unpack(theta, &mean, &factor);
    const Matrix cov = factor * factor.transpose();
    GaussianMeasure candidate(mean, SymMatrix::unchecked(cov));
    return gwb_lagrangian(candidate, *prior, *views, *view_map, lambda);
  }
};

Vector fd_gradient(const Objective& f, const Vector& theta) {
  Vector grad(theta.size());
  Vector probe = theta;
  for (Index i = 0; i < theta.size(); ++i) {
    const double h = 3e-6 * (1.0 + std::abs(theta[i]));
    probe[i] = theta[i] + h;
    const double up = f(probe);
    probe[i] = theta[i] - h;
    const double down = f(probe);
    probe[i] = theta[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

struct DescentResult {
  Vector theta;
  double value;
  bool converged;
  int iterations;
};

DescentResult descend(const Objective& f, Vector theta, int budget) {
  double value = f(theta);
  Vector grad = fd_gradient(f, theta);
  double step = 1e-2 / std::max(1.0, grad.norm());
  Vector theta_prev = theta;
  Vector grad_prev = grad;
  int iter = 0;
  bool converged = false;

  for (; iter < budget; ++iter) {
    const double grad_tol = 1e-9 * (1.0 + std::abs(value));
    if (grad.cwiseAbs().maxCoeff() <= grad_tol) {
      converged = true;
      break;
    }

    // Backtracking on the Barzilai-Borwein step.
    Vector candidate;
    double candidate_value = 0.0;
    double trial = step;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      candidate = theta - trial * grad;
      candidate_value = f(candidate);
      if (candidate_value <= value - 1e-4 * trial * grad.squaredNorm()) {
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    if (!accepted) {
      converged = grad.cwiseAbs().maxCoeff() <= 1e-7 * (1.0 + std::abs(value));
      break;
    }

    theta_prev = theta;
    grad_prev = grad;
    theta = candidate;
    value = candidate_value;
    grad = fd_gradient(f, theta);

    const Vector s = theta - theta_prev;
    const Vector y = grad - grad_prev;
    const double sy = s.dot(y);
    step = sy > 1e-18 ? std::clamp(s.squaredNorm() / sy, 1e-9, 1e3)
                      : std::min(2.0 * trial, 1e3);
  }
  return DescentResult{std::move(theta), value, converged, iter};
}

}  // namespace

OracleResult gwb_numeric_oracle(const Vector& mu_p, const Matrix& cov_p, const ViewSet& views,
                                double lambda, int budget, std::uint64_t seed, int n_starts) {
  if (std::isnan(lambda) || lambda < 0.0 || std::isinf(lambda))
    fail(Errc::negative_lambda, "gwb_numeric_oracle: lambda must be finite and >= 0");
  const Index n = mu_p.size();
  const GaussianMeasure prior(mu_p, SymMatrix::covariance(cov_p));
  const GaussianMeasure view_measure(views.nu, views.cov);
  Objective objective{&prior, &view_measure, &views.P, lambda, Packing{n}};

  Eigen::LLT<Matrix> llt(cov_p);
  if (llt.info() != Eigen::Success)
    fail(Errc::not_psd, "gwb_numeric_oracle: prior covariance is not positive definite");
  const Matrix prior_factor = llt.matrixL();

  Rng rng(seed);
  const double mean_scale = 1.0 + mu_p.cwiseAbs().maxCoeff() + views.nu.cwiseAbs().maxCoeff();

  OracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  int total_iters = 0;

  for (int start = 0; start < std::max(n_starts, 1); ++start) {
    Vector mean0 = mu_p;
    Matrix factor0 = prior_factor;
    if (start > 0) {
      for (Index i = 0; i < n; ++i) mean0[i] += 0.5 * mean_scale * rng.normal();
      Matrix jitter(n, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
          jitter(i, j) = i >= j ? 0.3 * rng.normal() : 0.0;
      factor0 = prior_factor + prior_factor.cwiseAbs().maxCoeff() * jitter;
    }

    DescentResult run = descend(objective, objective.packing.pack(mean0, factor0), budget);
    total_iters += run.iterations;
    if (run.value < best.value) {
      Vector mean;
      Matrix factor;
      objective.packing.unpack(run.theta, &mean, &factor);
      best.mean = std::move(mean);
      best.cov = factor * factor.transpose();
      best.value = run.value;
      best.converged = run.converged;
    }
  }
  best.iterations = total_iters;
  return best;
}

}  // namespace gwb
