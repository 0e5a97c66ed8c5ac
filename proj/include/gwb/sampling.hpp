#pragma once

#include "gwb/rng.hpp"
#include "gwb/sym_matrix.hpp"

namespace gwb {

// n rows of N(mean, cov) draws. The factor is the spectral square root, so
// degenerate covariances are legal (cov = 0 reproduces the mean exactly).
Matrix sample_mvn(const Vector& mean, const Matrix& cov, Index n, Rng& rng);

// Wishart(df, scale) draw via the Bartlett factorization. Requires df >= dim;
// scale may be singular. E[W] = df * scale.
Matrix sample_wishart(int df, const Matrix& scale, Rng& rng);

// Random correlation matrix: a Wishart(dim + 2, I) draw rescaled to unit diagonal.
Matrix random_correlation(Index dim, Rng& rng);

enum class ViewKind { Correct, Ambiguous, Incorrect };

const char* view_kind_name(ViewKind k);
ViewKind view_kind_from_name(const std::string& name);

// Synthesizes a noisy view statement about the forward window:
//   cov_view   = S / ell_f with S ~ Wishart(ell_f, P cov_fwd P^T)
//   nu ~ N(sign * P mu_fwd, cov_view), sign = +1 / 0 / -1 by kind.
// Requires ell_f >= number of views (Wishart degrees-of-freedom floor).
struct GeneratedViews {
  Vector nu;
  Matrix cov;
};
GeneratedViews generate_views(ViewKind kind, const Matrix& P, const Vector& mu_fwd,
                              const Matrix& cov_fwd, int ell_f, Rng& rng);

}  // namespace gwb
