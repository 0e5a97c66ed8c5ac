#include "gwb/posterior.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace gwb {

namespace {

void require_dims(const Vector& mu_p, const Matrix& cov_p, const ViewSet& views,
                  const char* where) {
  const Index n = mu_p.size();
  if (n == 0) fail(Errc::dimension_mismatch, std::string(where) + ": empty prior drift");
  if (cov_p.rows() != n || cov_p.cols() != n)
    fail(Errc::dimension_mismatch, std::string(where) + ": prior cov is " +
                                       std::to_string(cov_p.rows()) + "x" +
                                       std::to_string(cov_p.cols()) + " for dimension " +
                                       std::to_string(n));
  validate_views(views, n);
}

void require_target(const ViewSet& views, ViewTarget expected, const char* where) {
  if (views.target != expected)
    fail(Errc::target_mismatch,
         std::string(where) + (expected == ViewTarget::DriftSpace
                                   ? ": views must target drift space"
                                   : ": views must target return space"));
}

void require_lambda(double lambda, const char* where) {
  if (std::isnan(lambda) || lambda < 0.0)
    fail(Errc::negative_lambda, std::string(where) + ": lambda must be >= 0");
}

// Throws unless m is strictly positive definite at the spectral rank cutoff.
void require_spd(const Matrix& m, Errc code, const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const double max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
  if (max_abs <= 0.0 || es.eigenvalues().minCoeff() <= default_rank_tol(max_abs, m.rows()))
    fail(code, std::string(what) + " must be invertible");
}

Matrix solve_spd(const Matrix& a, const Matrix& rhs, Errc code, const char* what) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    fail(code, std::string(what) + ": Cholesky factorization failed");
  return llt.solve(rhs);
}

Matrix sym(const Matrix& m) { return ((m + m.transpose()) / 2).eval(); }

}  // namespace

const char* method_name(UpdateMethod m) {
  switch (m) {
    case UpdateMethod::BL1: return "bl1";
    case UpdateMethod::BL2: return "bl2";
    case UpdateMethod::GWB1: return "gwb1";
    case UpdateMethod::GWB2: return "gwb2";
  }
  return "unknown";
}

Vector equilibrium_drift(const Matrix& cov, const Vector& w_bm, double gamma, double rf) {
  const Index n = w_bm.size();
  if (cov.rows() != n || cov.cols() != n)
    fail(Errc::dimension_mismatch, "equilibrium_drift: cov is " + std::to_string(cov.rows()) +
                                       "x" + std::to_string(cov.cols()) + " for " +
                                       std::to_string(n) + " weights");
  if (!(gamma > 0.0)) fail(Errc::out_of_range, "equilibrium_drift: gamma must be positive");
  if (std::abs(w_bm.sum() - 1.0) > 1e-6)
    fail(Errc::out_of_range, "equilibrium_drift: benchmark weights must sum to 1, got " +
                                 std::to_string(w_bm.sum()));
  return rf * Vector::Ones(n) + gamma * (cov * w_bm);
}

PosteriorUpdate bl1_update(const PriorSpec& prior, const ViewSet& views) {
  prior.validate();
  require_dims(prior.mu, prior.cov.mat(), views, "bl1_update");
  require_target(views, ViewTarget::DriftSpace, "bl1_update");
  require_spd(views.cov.mat(), Errc::singular_view_covariance, "bl1_update: view covariance");

  const Index n = prior.dim();
  const Matrix cov_d = prior.tau * prior.cov.mat();
  Eigen::LLT<Matrix> llt_d(cov_d);
  if (llt_d.info() != Eigen::Success)
    fail(Errc::not_psd, "bl1_update: prior covariance is not positive definite");
  Eigen::LLT<Matrix> llt_v(views.cov.mat());
  if (llt_v.info() != Eigen::Success)
    fail(Errc::singular_view_covariance, "bl1_update: view covariance is not positive definite");

  const Matrix eye = Matrix::Identity(n, n);
  const Matrix precision = sym(llt_d.solve(eye) + views.P.transpose() * llt_v.solve(views.P));
  const Vector rhs = llt_d.solve(prior.mu) + views.P.transpose() * llt_v.solve(views.nu);
  Eigen::LLT<Matrix> llt_post(precision);
  if (llt_post.info() != Eigen::Success)
    fail(Errc::not_psd, "bl1_update: posterior precision is not positive definite");
  const Vector mean = llt_post.solve(rhs);
  const Matrix cov_mu = sym(llt_post.solve(eye));

  PosteriorUpdate out;
  out.mean = mean;
  out.cov = SymMatrix::unchecked(sym(prior.cov.mat() + cov_mu));
  out.method = UpdateMethod::BL1;
  return out;
}

PosteriorUpdate bl2_update(const Vector& mu_hat, const SymMatrix& cov_hat, const ViewSet& views) {
  require_dims(mu_hat, cov_hat.mat(), views, "bl2_update");
  require_target(views, ViewTarget::ReturnSpace, "bl2_update");
  require_spd(cov_hat.mat(), Errc::not_psd, "bl2_update: prior covariance");
  require_spd(views.cov.mat(), Errc::singular_view_covariance, "bl2_update: view covariance");

  const Index n = mu_hat.size();
  Eigen::LLT<Matrix> llt_r(cov_hat.mat());
  if (llt_r.info() != Eigen::Success)
    fail(Errc::not_psd, "bl2_update: prior covariance is not positive definite");
  Eigen::LLT<Matrix> llt_v(views.cov.mat());
  if (llt_v.info() != Eigen::Success)
    fail(Errc::singular_view_covariance, "bl2_update: view covariance is not positive definite");

  const Matrix eye = Matrix::Identity(n, n);
  const Matrix precision = sym(llt_r.solve(eye) + views.P.transpose() * llt_v.solve(views.P));
  const Vector rhs = llt_r.solve(mu_hat) + views.P.transpose() * llt_v.solve(views.nu);
  Eigen::LLT<Matrix> llt_post(precision);
  if (llt_post.info() != Eigen::Success)
    fail(Errc::not_psd, "bl2_update: posterior precision is not positive definite");

  PosteriorUpdate out;
  out.mean = llt_post.solve(rhs);
  out.cov = SymMatrix::unchecked(sym(llt_post.solve(eye)));
  out.method = UpdateMethod::BL2;
  return out;
}

// The blended covariance is (W + B) cov_p (W + B) with W = (I + lambda P^T P)^{-1}
// and B = lambda W A^{-1/2} (A^{1/2} Q A^{1/2})^{1/2} A^{-1/2} W, A = W cov_p W,
// Q = P^T cov_V P. Evaluating B literally squares the condition number of W, so
// this routine works in the right singular basis of P where W is diagonal and the
// scaling factors cancel algebraically:
//   with P = U S V^T, L = chol(V^T cov_p V), g_i = lambda s_i / (1 + lambda s_i^2):
//   B = V L^{-T} (L^T G U^T cov_V U G^T L)^{1/2} L^{-1} V^T,  G = diag(g).
// The substitution is exact (B = W S_r W for the unique PSD root S_r of
// S_r A S_r = lambda^2 Q) and stays finite as lambda -> +inf, where w_i -> 0 and
// g_i -> 1/s_i realize the constrained limit directly.
GwbCore gwb_core_update(const Vector& mu_p, const Matrix& cov_p, const ViewSet& views,
                        double lambda) {
  require_dims(mu_p, cov_p, views, "gwb_core_update");
  require_lambda(lambda, "gwb_core_update");
  require_spd(cov_p, Errc::not_psd, "gwb_core_update: prior covariance");

  if (lambda == 0.0) {
    GwbCore out;
    out.mean = mu_p;
    out.cov = SymMatrix::unchecked(cov_p);
    return out;
  }

  const Index na = mu_p.size();
  const Index nv = views.n_views();
  const bool pinned = std::isinf(lambda);

  Eigen::JacobiSVD<Matrix> svd(views.P, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sing = svd.singularValues();
  const double sv_cut = static_cast<double>(std::max(na, nv)) *
                        std::numeric_limits<double>::epsilon() *
                        (sing.size() > 0 ? sing.maxCoeff() : 0.0);
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();

  Vector w(na);
  Vector g(na);
  for (Index i = 0; i < na; ++i) {
    const double s = (i < sing.size() && sing[i] > sv_cut) ? sing[i] : 0.0;
    if (s == 0.0) {
      w[i] = 1.0;
      g[i] = 0.0;
    } else if (pinned) {
      w[i] = 0.0;
      g[i] = 1.0 / s;
    } else {
      w[i] = 1.0 / (1.0 + lambda * s * s);
      g[i] = lambda * s * w[i];
    }
  }

  const Vector mu_rot = v.transpose() * mu_p;
  const Vector nu_rot = u.transpose() * views.nu;
  Vector mean_rot = w.cwiseProduct(mu_rot);
  const Index shared = std::min(na, nv);
  for (Index i = 0; i < shared; ++i) mean_rot[i] += g[i] * nu_rot[i];

  const Matrix cov_p_rot = sym(v.transpose() * cov_p * v);
  Eigen::LLT<Matrix> llt(cov_p_rot);
  if (llt.info() != Eigen::Success)
    fail(Errc::not_psd, "gwb_core_update: prior covariance is not positive definite");
  const Matrix chol_l = llt.matrixL();
  const Matrix chol_u = chol_l.transpose();

  const Matrix cov_v_rot = sym(u.transpose() * views.cov.mat() * u);
  Matrix lifted = Matrix::Zero(na, na);
  for (Index i = 0; i < shared; ++i)
    for (Index j = 0; j < shared; ++j) lifted(i, j) = g[i] * g[j] * cov_v_rot(i, j);

  const Matrix k = sym(chol_u * lifted * chol_l);
  const Matrix k_root = sym_sqrt(k);
  const Matrix half = chol_u.triangularView<Eigen::Upper>().solve(k_root);
  Matrix b_rot = chol_u.triangularView<Eigen::Upper>().solve(half.transpose()).transpose();
  b_rot = sym(b_rot);
  b_rot += Matrix(w.asDiagonal());

  const Matrix cov_rot = sym(b_rot * cov_p_rot * b_rot);
  Matrix cov = clip_to_psd(sym(v * cov_rot * v.transpose()));

  GwbCore out;
  out.mean = v * mean_rot;
  out.cov = SymMatrix::unchecked(std::move(cov));
  return out;
}

PosteriorUpdate gwb1_update(const PriorSpec& prior, const ViewSet& views, double lambda) {
  prior.validate();
  require_target(views, ViewTarget::DriftSpace, "gwb1_update");
  const Matrix drift_cov = prior.tau * prior.cov.mat();
  GwbCore core = gwb_core_update(prior.mu, drift_cov, views, lambda);
  PosteriorUpdate out;
  out.mean = std::move(core.mean);
  out.cov = SymMatrix::unchecked(sym(prior.cov.mat() + core.cov.mat()));
  out.method = UpdateMethod::GWB1;
  out.lambda = lambda;
  return out;
}

PosteriorUpdate gwb2_update(const Vector& mu_hat, const SymMatrix& cov_hat, const ViewSet& views,
                            double lambda) {
  require_target(views, ViewTarget::ReturnSpace, "gwb2_update");
  GwbCore core = gwb_core_update(mu_hat, cov_hat.mat(), views, lambda);
  PosteriorUpdate out;
  out.mean = std::move(core.mean);
  out.cov = std::move(core.cov);
  out.method = UpdateMethod::GWB2;
  out.lambda = lambda;
  return out;
}

CrossCheckReport gwb_cross_checks(const Vector& mu_p, const Matrix& cov_p, const ViewSet& views,
                                  double lambda) {
  require_dims(mu_p, cov_p, views, "gwb_cross_checks");
  require_lambda(lambda, "gwb_cross_checks");

  CrossCheckReport report;
  if (!std::isfinite(lambda)) return report;

  const Index n = mu_p.size();
  const Matrix q = sym(views.P.transpose() * views.cov.mat() * views.P);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es_q(q);
    const double max_abs = es_q.eigenvalues().cwiseAbs().maxCoeff();
    if (max_abs <= 0.0 ||
        es_q.eigenvalues().minCoeff() <= default_rank_tol(max_abs, n))
      return report;  // lifted view covariance degenerate: alternate forms need Q^{-1}
    Eigen::SelfAdjointEigenSolver<Matrix> es_p(cov_p);
    const double max_abs_p = es_p.eigenvalues().cwiseAbs().maxCoeff();
    if (max_abs_p <= 0.0 ||
        es_p.eigenvalues().minCoeff() <= default_rank_tol(max_abs_p, n))
      return report;
  }

  const Matrix eye = Matrix::Identity(n, n);
  const Matrix w_inv = eye + lambda * (views.P.transpose() * views.P);
  const Matrix w = solve_spd(w_inv, eye, Errc::non_convergence, "gwb_cross_checks: W");
  const Matrix a = sym(w * cov_p * w);
  const Matrix a_half = sym_sqrt(a);
  const Matrix a_half_inv = pseudo_inverse_sqrt(a);
  const Matrix core = sym_sqrt(sym(a_half * q * a_half));

  // Direct geometric-mean route.
  const Matrix b = sym(lambda * w * a_half_inv * core * a_half_inv * w);
  const Matrix c_direct = sym((w + b) * cov_p * (w + b));

  // Product-root variant built on the prior factor.
  const Matrix cp_half = sym_sqrt(cov_p);
  const Matrix mid = pseudo_inverse_sqrt(sym(cp_half * w * q * w * cp_half));
  const Matrix gamma_term = sym(w * cp_half * mid * cp_half * w);
  const Matrix lam_w_gamma = lambda * w + gamma_term;
  const Matrix c_product = sym(lam_w_gamma * q * lam_w_gamma);

  // Anticommutator variant: A + lambda^2 W Q W + lambda ((A Q)^{1/2} W + W (Q A)^{1/2}).
  const Matrix aq_half = a_half * core * pseudo_inverse(a_half);
  const Matrix c_split =
      sym(a + lambda * lambda * (w * q * w) + lambda * (aq_half * w + w * aq_half.transpose()));

  // Inverse formula: C^{-1} = W^{-1} A^{1/2} (A^{1/2} W^{-1} A^{1/2} + lambda core)^{-2} A^{1/2} W^{-1}.
  const Matrix inner = sym(a_half * w_inv * a_half) + lambda * core;
  const Matrix inner_sq = sym(inner * inner);
  const Matrix inner_sq_inv =
      solve_spd(inner_sq, eye, Errc::non_convergence, "gwb_cross_checks: inverse form");
  const Matrix c_inv = sym(w_inv * a_half * inner_sq_inv * a_half * w_inv);
  const Matrix c_from_inverse =
      solve_spd(c_inv, eye, Errc::non_convergence, "gwb_cross_checks: inverse of inverse form");

  const Matrix c_prod_route = gwb_core_update(mu_p, cov_p, views, lambda).cov.mat();

  const Matrix forms[] = {c_direct, c_product, c_split, sym(c_from_inverse), c_prod_route};
  double scale = 0.0;
  for (const Matrix& f : forms) scale = std::max(scale, f.norm());
  double max_dev = 0.0;
  for (std::size_t i = 0; i < std::size(forms); ++i)
    for (std::size_t j = i + 1; j < std::size(forms); ++j)
      max_dev = std::max(max_dev, (forms[i] - forms[j]).norm() / scale);

  report.applicable = true;
  report.max_rel_dev = max_dev;
  report.inverse_residual = (c_inv * c_direct - eye).cwiseAbs().maxCoeff();
  return report;
}

}  // namespace gwb
