#pragma once

#include <cstdint>
#include <random>

#include "upq/matrix_kernel.hpp"

namespace upq {

using Rng = std::mt19937_64;

/// Independent stream `stream` of a master seed. Reproducible across runs.
inline Rng make_stream(std::uint64_t master, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x75707131u};
  return Rng(seq);
}

inline double std_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

inline double uniform01(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng);
}

/// Complex Gaussian with E|z|^2 = scale^2.
inline cplx complex_normal(Rng& rng, double scale = 1.0) {
  const double a = std_normal(rng), b = std_normal(rng);
  return cplx(a, b) * (scale / std::sqrt(2.0));
}

inline CMatrix complex_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                       double scale = 1.0) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal(rng, scale);
  return m;
}

/// Haar-distributed unitary via QR of a Gaussian matrix with phase-fixed diagonal.
inline CMatrix haar_unitary(Rng& rng, Eigen::Index n) {
  if (n == 0) return CMatrix(0, 0);
  const CMatrix g = complex_gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

} // namespace upq
