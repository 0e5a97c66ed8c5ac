#pragma once

#include <cstdint>

#include "gwb/views.hpp"

namespace gwb {

// Direct numeric minimization of the view-blending objective over (mean, chol
// factor). Exists to certify the closed-form update through an independent
// route; production code never calls it. Multi-start finite-difference descent
// with Barzilai-Borwein steps.
struct OracleResult {
  Vector mean;
  Matrix cov;
  double value = 0.0;
  bool converged = false;  // false reports budget exhaustion with best-so-far
  int iterations = 0;
};

OracleResult gwb_numeric_oracle(const Vector& mu_p, const Matrix& cov_p, const ViewSet& views,
                                double lambda, int budget = 4000, std::uint64_t seed = 1,
                                int n_starts = 5);

}  // namespace gwb
