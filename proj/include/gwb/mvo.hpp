#pragma once

#include "gwb/sym_matrix.hpp"

namespace gwb {

// Long-only fully-invested mean-variance program:
//   maximize (drift - rf 1)^T x - (gamma / 2) x^T cov x
//   subject to x >= 0, 1^T x = 1.
struct MvoProblem {
  Vector drift;
  SymMatrix cov;
  double gamma = 2.5;
  double rf = 0.0;
};

struct Weights {
  Vector w;
};

// KKT residuals certifying the returned point (mu is the budget multiplier):
//   stationarity: max_{i in support} |g_i + mu|
//   dual_feasibility: max(0, -min_i (g_i + mu))
//   complementarity: max_i |x_i (g_i + mu)|
struct KktInfo {
  double stationarity = 0.0;
  double dual_feasibility = 0.0;
  double complementarity = 0.0;
  int iterations = 0;
};

// Euclidean projection onto the probability simplex.
Vector project_to_simplex(const Vector& v);

// Deterministic solve: accelerated projected gradient from the equal-weight
// start, refined by an active-set step, certified by KKT residuals
// (stationarity <= 1e-7, complementarity <= 1e-8). Throws NonConvergence if the
// certificate cannot be met within the iteration budget.
Weights solve_mvo(const MvoProblem& problem, KktInfo* info = nullptr);

// Minimum-variance point of the same feasible set (zero drift, same gamma).
Weights min_vol_weights(const SymMatrix& cov, double gamma);

}  // namespace gwb
