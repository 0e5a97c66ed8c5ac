#include "gwb/mvo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace gwb {

namespace {

constexpr double kStationarityTol = 1e-7;
constexpr double kComplementarityTol = 1e-8;

struct Kkt {
  double stationarity;
  double dual_feasibility;
  double complementarity;
};

Kkt kkt_residuals(const Vector& x, const Vector& grad) {
  // Budget multiplier chosen as the weighted average of the support gradient.
  const double mu = -x.dot(grad);
  Kkt r{0.0, 0.0, 0.0};
  for (Index i = 0; i < x.size(); ++i) {
    const double z = grad[i] + mu;
    if (x[i] > 1e-12) r.stationarity = std::max(r.stationarity, std::abs(z));
    r.dual_feasibility = std::max(r.dual_feasibility, -z);
    r.complementarity = std::max(r.complementarity, std::abs(x[i] * z));
  }
  r.dual_feasibility = std::max(r.dual_feasibility, 0.0);
  return r;
}

bool certified(const Kkt& r) {
  return r.stationarity <= kStationarityTol && r.dual_feasibility <= kStationarityTol &&
         r.complementarity <= kComplementarityTol;
}

// Equality-constrained QP on the support set: minimize (1/2) x^T H x - c^T x with
// 1^T x = 1 via the bordered KKT system. Returns false if the solve is unusable.
bool solve_support(const Matrix& hess, const Vector& c, const std::vector<Index>& support,
                   Vector* x_out) {
  const Index k = static_cast<Index>(support.size());
  Matrix kkt = Matrix::Zero(k + 1, k + 1);
  Vector rhs(k + 1);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) kkt(a, b) = hess(support[a], support[b]);
    kkt(a, k) = 1.0;
    kkt(k, a) = 1.0;
    rhs[a] = c[support[a]];
  }
  rhs[k] = 1.0;
  Eigen::LDLT<Matrix> ldlt(kkt);
  if (ldlt.info() != Eigen::Success) return false;
  const Vector sol = ldlt.solve(rhs);
  if (!sol.allFinite()) return false;
  if ((kkt * sol - rhs).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
    return false;
  *x_out = sol.head(k);
  return true;
}

// Lawson-Hanson style active-set refinement from a feasible warm start.
bool polish_active_set(const Matrix& hess, const Vector& c, Vector* x_io, int* iters) {
  const Index n = c.size();
  Vector x = *x_io;
  std::vector<Index> support;
  for (Index i = 0; i < n; ++i)
    if (x[i] > 1e-10) support.push_back(i);
  if (support.empty()) {
    Index best = 0;
    for (Index i = 1; i < n; ++i)
      if (x[i] > x[best]) best = i;
    support.push_back(best);
    x.setZero();
    x[best] = 1.0;
  }

  const int max_rounds = static_cast<int>(4 * n + 16);
  for (int round = 0; round < max_rounds; ++round) {
    ++*iters;
    Vector x_eq;
    if (!solve_support(hess, c, support, &x_eq)) return false;

    const double min_entry = x_eq.minCoeff();
    if (min_entry < -1e-14) {
      // Step from the current feasible point toward x_eq until a coordinate hits zero.
      double alpha = 1.0;
      Index drop = -1;
      for (Index a = 0; a < x_eq.size(); ++a) {
        if (x_eq[a] < -1e-14) {
          const double cur = x[support[static_cast<std::size_t>(a)]];
          const double step = cur / (cur - x_eq[a]);
          if (step < alpha) {
            alpha = step;
            drop = a;
          }
        }
      }
      if (drop < 0) return false;
      for (Index a = 0; a < x_eq.size(); ++a) {
        const Index idx = support[static_cast<std::size_t>(a)];
        x[idx] = x[idx] + alpha * (x_eq[a] - x[idx]);
      }
      x[support[static_cast<std::size_t>(drop)]] = 0.0;
      support.erase(support.begin() + drop);
      if (support.empty()) return false;
      for (Index i = 0; i < n; ++i)
        if (x[i] < 0.0) x[i] = 0.0;
      continue;
    }

    x.setZero();
    for (Index a = 0; a < x_eq.size(); ++a)
      x[support[static_cast<std::size_t>(a)]] = std::max(x_eq[a], 0.0);

    const Vector grad = hess * x - c;
    double mu = 0.0;
    for (Index a = 0; a < x_eq.size(); ++a) mu -= grad[support[static_cast<std::size_t>(a)]];
    mu /= static_cast<double>(support.size());

    Index add = -1;
    double worst = -kStationarityTol / 2;
    for (Index i = 0; i < n; ++i) {
      if (std::find(support.begin(), support.end(), i) != support.end()) continue;
      const double z = grad[i] + mu;
      if (z < worst) {
        worst = z;
        add = i;
      }
    }
    if (add < 0) {
      *x_io = x;
      return true;
    }
    support.insert(std::lower_bound(support.begin(), support.end(), add), add);
  }
  return false;
}

}  // namespace

Vector project_to_simplex(const Vector& v) {
  const Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  Index rho = 0;
  for (Index i = 0; i < n; ++i) {
    cumulative += u[static_cast<std::size_t>(i)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - candidate > 0.0) {
      rho = i + 1;
      theta = candidate;
    }
  }
  (void)rho;
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

Weights solve_mvo(const MvoProblem& problem, KktInfo* info) {
  const Index n = problem.drift.size();
  if (n == 0) fail(Errc::dimension_mismatch, "solve_mvo: empty drift vector");
  if (problem.cov.dim() != n)
    fail(Errc::dimension_mismatch, "solve_mvo: cov is " + std::to_string(problem.cov.dim()) +
                                       "x" + std::to_string(problem.cov.dim()) + " for " +
                                       std::to_string(n) + " assets");
  if (!(problem.gamma > 0.0)) fail(Errc::out_of_range, "solve_mvo: gamma must be positive");
  if (!problem.drift.allFinite()) fail(Errc::out_of_range, "solve_mvo: drift must be finite");

  // Minimize F(x) = (1/2) x^T H x - c^T x with H = gamma * cov, c = drift - rf 1.
  const Matrix hess = problem.gamma * problem.cov.mat();
  const Vector c = problem.drift.array() - problem.rf;

  const double lipschitz = std::max(problem.gamma * max_abs_eigenvalue(problem.cov.mat()), 0.0);
  const double step = 1.0 / std::max(lipschitz, 1e-12);

  Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector y = x;
  double momentum = 1.0;
  int iters = 0;
  const int cap = static_cast<int>(50 * n * n + 1000);
  const int chunk = 500;

  Kkt residuals = kkt_residuals(x, hess * x - c);
  while (true) {
    if (!certified(residuals)) {
      for (int i = 0; i < chunk && iters < cap; ++i, ++iters) {
        const Vector grad = hess * y - c;
        Vector x_next = project_to_simplex(y - step * grad);
        const double momentum_next = (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum)) / 2.0;
        const Vector diff = x_next - x;
        // Restart the momentum when it points against the descent direction.
        if (grad.dot(diff) > 0.0) {
          y = x_next;
          momentum = 1.0;
        } else {
          y = x_next + ((momentum - 1.0) / momentum_next) * diff;
          momentum = momentum_next;
        }
        x = std::move(x_next);
      }
    }

    Vector polished = x;
    int polish_iters = 0;
    if (polish_active_set(hess, c, &polished, &polish_iters)) {
      polished = polished.cwiseMax(0.0);
      polished /= polished.sum();
      const Kkt polished_residuals = kkt_residuals(polished, hess * polished - c);
      if (certified(polished_residuals)) {
        if (info != nullptr) {
          info->stationarity = polished_residuals.stationarity;
          info->dual_feasibility = polished_residuals.dual_feasibility;
          info->complementarity = polished_residuals.complementarity;
          info->iterations = iters + polish_iters;
        }
        return Weights{std::move(polished)};
      }
    }

    residuals = kkt_residuals(x, hess * x - c);
    if (certified(residuals)) break;
    if (iters >= cap)
      fail(Errc::non_convergence,
           "solve_mvo: KKT certificate not met after " + std::to_string(iters) +
               " iterations (stationarity " + std::to_string(residuals.stationarity) +
               ", complementarity " + std::to_string(residuals.complementarity) + ")");
  }

  x = x.cwiseMax(0.0);
  x /= x.sum();
  residuals = kkt_residuals(x, hess * x - c);
  if (info != nullptr) {
    info->stationarity = residuals.stationarity;
    info->dual_feasibility = residuals.dual_feasibility;
    info->complementarity = residuals.complementarity;
    info->iterations = iters;
  }
  return Weights{std::move(x)};
}

Weights min_vol_weights(const SymMatrix& cov, double gamma) {
  MvoProblem problem;
  problem.drift = Vector::Zero(cov.dim());
  problem.cov = cov;
  problem.gamma = gamma;
  problem.rf = 0.0;
  return solve_mvo(problem);
}

}  // namespace gwb
