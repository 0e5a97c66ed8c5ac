#pragma once

#include <string>
#include <vector>

namespace gwb {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast built-in invariant suite covering the core numerical contracts:
// confidence limits, cross-form agreement, metric axioms, solver certificates,
// sampler moments and serialization stability.
std::vector<SelfTestResult> run_selftest();

bool all_passed(const std::vector<SelfTestResult>& results);

}  // namespace gwb
