#include "gwb/sampling.hpp"

#include <string>

namespace gwb {

Matrix sample_mvn(const Vector& mean, const Matrix& cov, Index n, Rng& rng) {
  const Index d = mean.size();
  if (cov.rows() != d || cov.cols() != d)
    fail(Errc::dimension_mismatch, "sample_mvn: cov is " + std::to_string(cov.rows()) + "x" +
                                       std::to_string(cov.cols()) + " for dimension " +
                                       std::to_string(d));
  if (n < 1) fail(Errc::out_of_range, "sample_mvn: need at least one draw");
  const Matrix factor = sym_sqrt(cov);
  Matrix draws(n, d);
  Vector z(d);
  for (Index row = 0; row < n; ++row) {
    for (Index i = 0; i < d; ++i) z[i] = rng.normal();
    draws.row(row) = (mean + factor * z).transpose();
  }
  return draws;
}

Matrix sample_wishart(int df, const Matrix& scale, Rng& rng) {
  const Index d = scale.rows();
  if (scale.cols() != d || d == 0)
    fail(Errc::dimension_mismatch, "sample_wishart: scale must be square and non-empty");
  if (df < d)
    fail(Errc::insufficient_dof, "sample_wishart: df " + std::to_string(df) +
                                     " below dimension " + std::to_string(d));
  const Matrix factor = sym_sqrt(scale);
  Matrix bartlett = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    bartlett(i, i) = std::sqrt(rng.chi_squared(static_cast<double>(df - i)));
    for (Index j = 0; j < i; ++j) bartlett(i, j) = rng.normal();
  }
  const Matrix half = factor * bartlett;
  Matrix w = half * half.transpose();
  return ((w + w.transpose()) / 2).eval();
}

Matrix random_correlation(Index dim, Rng& rng) {
  if (dim < 1) fail(Errc::out_of_range, "random_correlation: dim must be positive");
  const Matrix w = sample_wishart(static_cast<int>(dim) + 2, Matrix::Identity(dim, dim), rng);
  Vector inv_root = w.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  Matrix corr = inv_root.asDiagonal() * w * inv_root.asDiagonal();
  corr.diagonal().setOnes();
  return ((corr + corr.transpose()) / 2).eval();
}

const char* view_kind_name(ViewKind k) {
  switch (k) {
    case ViewKind::Correct: return "correct";
    case ViewKind::Ambiguous: return "ambiguous";
    case ViewKind::Incorrect: return "incorrect";
  }
  return "unknown";
}

ViewKind view_kind_from_name(const std::string& name) {
  if (name == "correct") return ViewKind::Correct;
  if (name == "ambiguous") return ViewKind::Ambiguous;
  if (name == "incorrect") return ViewKind::Incorrect;
  fail(Errc::parse_error, "unknown view kind '" + name + "' (correct|ambiguous|incorrect)");
}

GeneratedViews generate_views(ViewKind kind, const Matrix& P, const Vector& mu_fwd,
                              const Matrix& cov_fwd, int ell_f, Rng& rng) {
  const Index nv = P.rows();
  const Index na = P.cols();
  if (mu_fwd.size() != na || cov_fwd.rows() != na || cov_fwd.cols() != na)
    fail(Errc::dimension_mismatch, "generate_views: forward moments do not match P");
  if (ell_f < nv)
    fail(Errc::insufficient_dof, "generate_views: window length " + std::to_string(ell_f) +
                                     " below view count " + std::to_string(nv));
  Matrix scale = P * cov_fwd * P.transpose();
  scale = clip_to_psd(((scale + scale.transpose()) / 2).eval());

  GeneratedViews out;
  out.cov = sample_wishart(ell_f, scale, rng) / static_cast<double>(ell_f);
  out.cov = clip_to_psd(out.cov);

  Vector center = Vector::Zero(nv);
  if (kind == ViewKind::Correct) center = P * mu_fwd;
  if (kind == ViewKind::Incorrect) center = -(P * mu_fwd);
  out.nu = sample_mvn(center, out.cov, 1, rng).row(0).transpose();
  return out;
}

}  // namespace gwb
