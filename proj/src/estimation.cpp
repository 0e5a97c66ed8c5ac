#include "gwb/estimation.hpp"

#include "gwb/errors.hpp"
#include "gwb/matrix_ops.hpp"

namespace gwb {

Vector sample_mean(const Matrix& rows) {
  if (rows.rows() < 1) fail(Errc::too_short, "mean needs at least one observation");
  return rows.colwise().mean();
}

Matrix sample_covariance(const Matrix& rows) {
  const Index n = rows.rows();
  if (n < 2) fail(Errc::too_short, "sample covariance needs at least two observations");
  const Matrix centered = rows.rowwise() - rows.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(n - 1);
}

SymMatrix ensure_spd(const Matrix& cov, bool* loaded) {
  Matrix clipped = clip_to_psd(0.5 * (cov + cov.transpose()));
  const Index n = clipped.rows();
  const double floor = default_rank_tol(max_abs_eigenvalue(clipped), n);
  bool added = false;
  if (min_eigenvalue(clipped) <= floor) {
    const double delta = 1e-8 * clipped.trace() / static_cast<double>(n) + 1e-14;
    clipped.diagonal().array() += delta;
    added = true;
  }
  if (loaded) *loaded = added;
  return SymMatrix::unchecked(clipped);
}

}  // namespace gwb
