#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gwb/errors.hpp"

namespace gwb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative tolerance for symmetry checks: max |a_ij - a_ji| <= kSymmetryTol * max |a_ij|.
inline constexpr double kSymmetryTol = 1e-10;

// Eigenvalues below -kPsdNoiseTol * |lambda|_max fail covariance-role PSD checks.
inline constexpr double kPsdNoiseTol = 1e-10;

// Eigenvalues below -kSqrtClipTol * |lambda|_max are rejected by sym_sqrt; above it they clip to 0.
inline constexpr double kSqrtClipTol = 1e-8;

template <typename Derived>
using DenseSquare = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Default spectral rank cutoff: 1e-12 * |lambda|_max * dim.
template <typename Scalar>
Scalar default_rank_tol(Scalar max_abs_eig, Index dim) {
  return Scalar(1e-12) * max_abs_eig * Scalar(dim);
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m, double rel_tol = kSymmetryTol) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) return false;
  if (m.rows() == 0) return true;
  const DenseSquare<Derived> a = m.derived();
  const Scalar scale = a.cwiseAbs().maxCoeff();
  const Scalar gap = (a - a.transpose()).cwiseAbs().maxCoeff();
  return gap <= Scalar(rel_tol) * scale;
}

template <typename Derived>
DenseSquare<Derived> symmetrized(const Eigen::MatrixBase<Derived>& m, const char* where,
                                 double rel_tol = kSymmetryTol) {
  if (m.rows() != m.cols())
    fail(Errc::dimension_mismatch, std::string(where) + ": matrix is " + std::to_string(m.rows()) +
                                       "x" + std::to_string(m.cols()) + ", expected square");
  if (m.rows() == 0)
    fail(Errc::dimension_mismatch, std::string(where) + ": matrix must be at least 1x1");
  if (!is_symmetric(m, rel_tol))
    fail(Errc::not_symmetric, std::string(where) + ": asymmetry exceeds relative tolerance " +
                                  std::to_string(rel_tol));
  return ((m.derived() + m.derived().transpose()) / 2).eval();
}

// Spectral square root of a symmetric PSD matrix. Round-off negatives within
// kSqrtClipTol * |lambda|_max clip to zero; anything lower is an error.
template <typename Derived>
DenseSquare<Derived> sym_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseSquare<Derived>;
  const Mat a = symmetrized(m, "sym_sqrt");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) fail(Errc::non_convergence, "sym_sqrt: eigensolver failed");
  const auto& eig = es.eigenvalues();
  const Scalar max_abs = eig.cwiseAbs().maxCoeff();
  const Scalar floor = -Scalar(kSqrtClipTol) * max_abs;
  for (Index i = 0; i < eig.size(); ++i) {
    if (eig[i] < floor)
      fail(Errc::not_psd, "sym_sqrt: eigenvalue " + std::to_string(eig[i]) +
                              " below clip tolerance " + std::to_string(floor));
  }
  const auto roots = eig.cwiseMax(Scalar(0)).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

// Moore-Penrose pseudoinverse of a symmetric matrix via its spectral decomposition.
// Eigenvalues with |lambda| <= tol are treated as zero. tol < 0 selects the default cutoff.
template <typename Derived>
DenseSquare<Derived> pseudo_inverse(const Eigen::MatrixBase<Derived>& m, double tol = -1.0) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseSquare<Derived>;
  const Mat a = symmetrized(m, "pseudo_inverse");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success)
    fail(Errc::non_convergence, "pseudo_inverse: eigensolver failed");
  const auto& eig = es.eigenvalues();
  const Scalar max_abs = eig.cwiseAbs().maxCoeff();
  const Scalar cut = tol >= 0 ? Scalar(tol) : default_rank_tol(max_abs, a.rows());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv(eig.size());
  for (Index i = 0; i < eig.size(); ++i)
    inv[i] = std::abs(eig[i]) > cut ? Scalar(1) / eig[i] : Scalar(0);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// Pseudoinverse square root: eigenvalues above tol map to 1/sqrt(lambda), the rest to 0.
template <typename Derived>
DenseSquare<Derived> pseudo_inverse_sqrt(const Eigen::MatrixBase<Derived>& m, double tol = -1.0) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseSquare<Derived>;
  const Mat a = symmetrized(m, "pseudo_inverse_sqrt");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success)
    fail(Errc::non_convergence, "pseudo_inverse_sqrt: eigensolver failed");
  const auto& eig = es.eigenvalues();
  const Scalar max_abs = eig.cwiseAbs().maxCoeff();
  const Scalar cut = tol >= 0 ? Scalar(tol) : default_rank_tol(max_abs, a.rows());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv(eig.size());
  for (Index i = 0; i < eig.size(); ++i)
    inv[i] = eig[i] > cut ? Scalar(1) / std::sqrt(eig[i]) : Scalar(0);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// Product of eigenvalues above tol; the empty product (rank 0) is 1.
template <typename Derived>
typename Derived::Scalar pseudo_det(const Eigen::MatrixBase<Derived>& m, double tol = -1.0) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseSquare<Derived>;
  const Mat a = symmetrized(m, "pseudo_det");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) fail(Errc::non_convergence, "pseudo_det: eigensolver failed");
  const auto& eig = es.eigenvalues();
  const Scalar max_abs = eig.cwiseAbs().maxCoeff();
  const Scalar cut = tol >= 0 ? Scalar(tol) : default_rank_tol(max_abs, a.rows());
  Scalar det = Scalar(1);
  for (Index i = 0; i < eig.size(); ++i)
    if (eig[i] > cut) det *= eig[i];
  return det;
}

// Rank by spectral cutoff (eigenvalues with |lambda| above tol).
template <typename Derived>
Index spectral_rank(const Eigen::MatrixBase<Derived>& m, double tol = -1.0) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseSquare<Derived>;
  const Mat a = symmetrized(m, "spectral_rank");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  const auto& eig = es.eigenvalues();
  const Scalar max_abs = eig.cwiseAbs().maxCoeff();
  const Scalar cut = tol >= 0 ? Scalar(tol) : default_rank_tol(max_abs, a.rows());
  Index r = 0;
  for (Index i = 0; i < eig.size(); ++i)
    if (std::abs(eig[i]) > cut) ++r;
  return r;
}

// Clips negative eigenvalues to zero. Inputs that are already PSD up to eigensolver
// round-off are returned unchanged, which makes the operation exactly idempotent.
template <typename Derived>
DenseSquare<Derived> clip_to_psd(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Mat = DenseSquare<Derived>;
  const Mat a = symmetrized(m, "clip_to_psd");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) fail(Errc::non_convergence, "clip_to_psd: eigensolver failed");
  const auto& eig = es.eigenvalues();
  const Scalar max_abs = eig.cwiseAbs().maxCoeff();
  const Scalar noise =
      Scalar(64) * Scalar(a.rows()) * std::numeric_limits<Scalar>::epsilon() * max_abs;
  if (eig.minCoeff() >= -noise) return a;
  return es.eigenvectors() * eig.cwiseMax(Scalar(0)).asDiagonal() *
         es.eigenvectors().transpose();
}

template <typename Derived>
typename Derived::Scalar min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<DenseSquare<Derived>> es(m.derived());
  return es.eigenvalues().minCoeff();
}

template <typename Derived>
typename Derived::Scalar max_abs_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<DenseSquare<Derived>> es(m.derived());
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace gwb
