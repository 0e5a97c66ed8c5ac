#pragma once

#include <string>
#include <vector>

#include "gwb/sym_matrix.hpp"

namespace gwb {

// Methodology labels in report column order: BM, BL1, BL2, then a GWB1/GWB2
// pair per confidence value (suffix "_t<confidence>").
std::vector<std::string> method_labels(const std::vector<double>& confidences);

// Per-rebalance capture for tests: the inputs the allocators saw and the
// weights they produced. view_nu / view_cov are the return-space view
// statement and stay empty when the rebalance held previous weights.
struct RebalanceRecord {
  Index period = 0;
  Vector mu_eq;
  Vector mu_hat;
  Matrix cov_hat;
  Vector view_nu;
  Matrix view_cov;
  Matrix weights;
  bool held = false;
  bool unsampled = false;
};

struct StageTrace {
  std::vector<std::string> methods;
  std::vector<std::vector<RebalanceRecord>> paths;
};

}  // namespace gwb
