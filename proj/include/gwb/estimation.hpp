#pragma once

#include "gwb/sym_matrix.hpp"

namespace gwb {

// Column means of an observations-by-assets block.
Vector sample_mean(const Matrix& rows);

// Unbiased sample covariance (n - 1 divisor) of the same block. Needs two rows.
Matrix sample_covariance(const Matrix& rows);

// PSD-clips the estimate, then adds the smallest diagonal loading that makes it
// numerically positive definite. Keeps downstream Cholesky-based updates usable
// on degenerate windows (an in-window constant asset, lookback shorter than the
// asset count).
SymMatrix ensure_spd(const Matrix& cov, bool* loaded = nullptr);

}  // namespace gwb
