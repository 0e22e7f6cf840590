#include <cmath>
#include <vector>

#include "test_helpers.hpp"
#include "upq/random.hpp"

using namespace upq;
using upq::test::max_abs_diff;

namespace {

CMatrix random_lower(Rng& rng, int n) {
  CMatrix l = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    l(i, i) = 0.5 + uniform01(rng);
    for (int j = 0; j < i; ++j) l(i, j) = complex_normal(rng);
  }
  return l;
}

} // namespace

TEST(Cholesky, IdentityAndScalar) {
  EXPECT_LT(max_abs_diff(cholesky_lower(CMatrix::Identity(3, 3)), CMatrix::Identity(3, 3)), 1e-15);
  const CMatrix four = CMatrix::Identity(4, 4) * cplx(4.0);
  EXPECT_LT(max_abs_diff(cholesky_lower(four), CMatrix::Identity(4, 4) * cplx(2.0)), 1e-15);
}

TEST(Cholesky, RecoversConstructedFactor) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const CMatrix l0 = random_lower(rng, n);
    const CMatrix m = l0 * l0.adjoint();
    const CMatrix l = cholesky_lower(m);
    EXPECT_LT(max_abs_diff(l, l0), 1e-10 * std::max(1.0, m.norm())) << "n=" << n;
    EXPECT_LT((l * l.adjoint() - m).norm(), 1e-10 * m.norm());
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(l(i, i).imag(), 0.0);
      EXPECT_GT(l(i, i).real(), 0.0);
    }
  }
}

TEST(Cholesky, Errors) {
  CMatrix m(2, 2);
  m << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(cholesky_lower(m), NotHermitian);
  m << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(cholesky_lower(m), NotPositiveDefinite);
  m << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(cholesky_lower(m), NotPositiveDefinite);
}

TEST(RealLinearDet, TrivialMaps) {
  EXPECT_DOUBLE_EQ(real_linear_det(2, [](const RVector& v) { return v; }), 1.0);
  for (int d = 1; d <= 6; ++d)
    EXPECT_NEAR(real_linear_det(d, [](const RVector& v) { return RVector(2.0 * v); }),
                std::pow(2.0, d), 1e-12);
}

TEST(RealLinearDet, DimensionMismatch) {
  std::vector<RVector> images{RVector::Zero(2), RVector::Zero(3)};
  EXPECT_THROW(real_linear_det(images), DimensionMismatch);
}

namespace {

// Real coordinates of a lower-triangular p×p matrix with real diagonal.
RVector lower_coords(const CMatrix& x) {
  const auto p = x.rows();
  RVector v(p * p);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    v(k++) = x(i, i).real();
    for (Eigen::Index j = 0; j < i; ++j) {
      v(k++) = x(i, j).real();
      v(k++) = x(i, j).imag();
    }
  }
  return v;
}

CMatrix lower_from(const RVector& v, Eigen::Index p) {
  CMatrix x = CMatrix::Zero(p, p);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    x(i, i) = v(k++);
    for (Eigen::Index j = 0; j < i; ++j) {
      x(i, j) = cplx(v(k), v(k + 1));
      k += 2;
    }
  }
  return x;
}

double right_mult_det(const CMatrix& s0) {
  const auto p = s0.rows();
  return real_linear_det(static_cast<int>(p * p), [&](const RVector& v) {
    return lower_coords(lower_from(v, p) * s0);
  });
}

} // namespace

TEST(RealLinearDet, RightTranslationMatchesProductFormula) {
  Rng rng(5);
  for (int p = 1; p <= 3; ++p) {
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix s0 = random_lower(rng, p);
      // Diagonal coefficient s0_jj on entry (i,j); complex entries count twice.
      double formula = 1.0;
      for (int j = 0; j < p; ++j) formula *= std::pow(s0(j, j).real(), 2 * (p - j) - 1);
      EXPECT_NEAR(right_mult_det(s0), formula, 1e-10 * std::abs(formula));
    }
  }
}

TEST(RealLinearDet, Multiplicative) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 1 + trial % 3;
    const CMatrix a = random_lower(rng, p), b = random_lower(rng, p);
    const double lhs = right_mult_det(a * b);
    EXPECT_NEAR(lhs, right_mult_det(a) * right_mult_det(b), 1e-10 * std::abs(lhs));
  }
}
