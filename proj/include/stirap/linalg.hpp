#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "stirap/units.hpp"

namespace stirap::linalg {

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const Matrix3c& m) { return max_abs(m - m.adjoint()); }

inline double unitarity_defect(const Matrix3c& u) {
  return max_abs(u.adjoint() * u - Matrix3c::Identity());
}

/// exp(-i H dt) for Hermitian H, via the spectral decomposition.
inline Matrix3c expm_hermitian(const Matrix3c& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(h);
  const Eigen::Vector3d& w = es.eigenvalues();
  const Matrix3c& v = es.eigenvectors();
  Vector3c phases;
  for (int k = 0; k < 3; ++k) phases(k) = std::polar(1.0, -w(k) * dt);
  return v * phases.asDiagonal() * v.adjoint();
}

/// Principal square root of a positive semidefinite Hermitian matrix;
/// negative eigenvalues (round-off) are clipped to zero.
template <typename Matrix>
Matrix sqrtm_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  auto w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().eval();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

inline double min_eigenvalue(const Matrix3c& m) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double real_trace(const Matrix3c& m) { return m.trace().real(); }

}  // namespace stirap::linalg
