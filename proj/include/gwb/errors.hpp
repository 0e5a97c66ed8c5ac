#pragma once

#include <stdexcept>
#include <string>

namespace gwb {

enum class Errc {
  not_symmetric,
  not_psd,
  dimension_mismatch,
  singular_view_covariance,
  target_mismatch,
  out_of_range,
  negative_lambda,
  empty_view_row,
  zero_variance,
  too_short,
  length_mismatch,
  insufficient_dof,
  non_convergence,
  budget_exhausted,
  parse_error,
  too_few_assets,
  io_error,
};

constexpr const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::not_psd: return "NotPsd";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::singular_view_covariance: return "SingularViewCovariance";
    case Errc::target_mismatch: return "TargetMismatch";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::negative_lambda: return "NegativeLambda";
    case Errc::empty_view_row: return "EmptyViewRow";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::too_short: return "TooShort";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::insufficient_dof: return "InsufficientDegreesOfFreedom";
    case Errc::non_convergence: return "NonConvergence";
    case Errc::budget_exhausted: return "BudgetExhausted";
    case Errc::parse_error: return "ParseError";
    case Errc::too_few_assets: return "TooFewAssets";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace gwb
