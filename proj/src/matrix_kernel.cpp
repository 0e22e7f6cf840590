#include "upq/matrix_kernel.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace upq {

CMatrix cholesky_lower(const CMatrix& m, double hermitian_tol) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("cholesky_lower needs a square matrix");
  if (!m.allFinite())
    throw NotPositiveDefinite("matrix has non-finite entries");
  const double scale = std::max(1.0, m.norm());
  if (hermitian_defect(m) > hermitian_tol * scale)
    throw NotHermitian("defect " + std::to_string(hermitian_defect(m)));

  // Explicit pivot check; Eigen's LLT would silently continue on the real part.
  const CMatrix herm = (m + m.adjoint()) * cplx(0.5);
  Eigen::LLT<CMatrix> llt(herm);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("factorization broke down");
  CMatrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double d = l(i, i).real();
    if (!(d > 0.0) || !std::isfinite(d))
      throw NotPositiveDefinite("pivot " + std::to_string(i) + " is " + std::to_string(d));
    l(i, i) = cplx(d, 0.0);
  }
  return l;
}

double real_linear_det(std::span<const RVector> images) {
  const auto d = static_cast<Eigen::Index>(images.size());
  RMatrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (images[j].size() != d)
      throw DimensionMismatch("image " + std::to_string(j) + " has size " +
                              std::to_string(images[j].size()) + ", expected " + std::to_string(d));
    a.col(j) = images[j];
  }
  if (d == 0) return 1.0;
  return a.partialPivLu().determinant();
}

double real_linear_det(int dim, const std::function<RVector(const RVector&)>& map) {
  std::vector<RVector> images;
  images.reserve(dim);
  for (int j = 0; j < dim; ++j)
    images.push_back(map(RVector::Unit(dim, j)));
  return real_linear_det(images);
}

CMatrix general_inverse(const CMatrix& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("general_inverse needs a square matrix");
  return m.fullPivLu().inverse();
}

} // namespace upq
