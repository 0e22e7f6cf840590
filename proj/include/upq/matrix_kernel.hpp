#pragma once

#include <complex>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "upq/errors.hpp"

namespace upq {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major, value semantics.
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using RMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RVector = Eigen::VectorXd;

/// Default tolerance for algebraic identities on desk-scale matrices.
inline constexpr double kAlgebraTol = 1e-10;

template <typename Derived>
typename Derived::RealScalar hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).norm();
}

template <typename Derived>
typename Derived::RealScalar skew_hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()).norm();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Projects onto the skew-Hermitian part, (m - m*)/2.
template <typename Derived>
auto skew_part(const Eigen::MatrixBase<Derived>& m) {
  return ((m - m.adjoint()) * typename Derived::Scalar(0.5)).eval();
}

/// Lower-triangular L with real positive diagonal and L·L* = M.
///
/// Throws NotHermitian when ‖M − M*‖_F exceeds `hermitian_tol`·max(1, ‖M‖_F)
/// and NotPositiveDefinite when a pivot is not strictly positive.
CMatrix cholesky_lower(const CMatrix& m, double hermitian_tol = 1e-12);

/// Determinant of a real-linear map on a d-dimensional real space, given the
/// images of the d standard basis vectors.
double real_linear_det(std::span<const RVector> images);

/// Same, with the map given as a callable on coordinate vectors.
double real_linear_det(int dim, const std::function<RVector(const RVector&)>& map);

/// Inverse through LU; used only where no structural inverse is available.
CMatrix general_inverse(const CMatrix& m);

} // namespace upq
