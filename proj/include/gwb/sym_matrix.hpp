#pragma once

#include <utility>

#include "gwb/matrix_ops.hpp"

namespace gwb {

// Value type for symmetric matrices. Factories validate on entry so downstream
// code can rely on symmetry (and, for covariance roles, PSD-ness up to noise).
class SymMatrix {
 public:
  SymMatrix() = default;

  // Checks symmetry to kSymmetryTol and stores the symmetrized matrix.
  static SymMatrix symmetric(const Matrix& m) { return SymMatrix(symmetrized(m, "SymMatrix")); }

  // As symmetric(), plus eigenvalues >= -kPsdNoiseTol * |lambda|_max.
  static SymMatrix covariance(const Matrix& m) {
    Matrix a = symmetrized(m, "SymMatrix::covariance");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const double max_abs = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() < -kPsdNoiseTol * max_abs)
      fail(Errc::not_psd, "SymMatrix::covariance: eigenvalue " +
                              std::to_string(es.eigenvalues().minCoeff()) +
                              " below noise tolerance");
    return SymMatrix(std::move(a));
  }

  // For matrices symmetric PSD by construction; skips the eigensolve.
  static SymMatrix unchecked(Matrix m) { return SymMatrix(std::move(m)); }

  Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  operator const Matrix&() const { return m_; }

 private:
  explicit SymMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

}  // namespace gwb
