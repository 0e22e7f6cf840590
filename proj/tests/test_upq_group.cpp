#include "test_helpers.hpp"
#include "upq/iwasawa.hpp"

using namespace upq;
using upq::test::max_abs_diff;

TEST(Sigma, SmallCases) {
  CMatrix s11(2, 2);
  s11 << 0, 1, 1, 0;
  EXPECT_EQ(sigma(Signature(1, 1)), s11);

  CMatrix s12 = CMatrix::Zero(3, 3);
  s12(0, 2) = s12(1, 1) = s12(2, 0) = 1.0;
  EXPECT_EQ(sigma(Signature(1, 2)), s12);
}

TEST(Sigma, InvolutionExactly) {
  for (int p = 1; p <= 3; ++p)
    for (int q = p; q <= 4; ++q) {
      const CMatrix s = sigma(Signature(p, q));
      EXPECT_EQ(s * s, CMatrix::Identity(p + q, p + q));
      EXPECT_EQ(s, s.adjoint());
    }
}

TEST(Signature, RejectsInvalid) {
  EXPECT_THROW(Signature(0, 1), InvalidInput);
  EXPECT_THROW(Signature(2, 1), InvalidInput);
}

TEST(IsMember, Basics) {
  const Signature sig(1, 2);
  const auto id = is_member(CMatrix::Identity(3, 3), sig);
  EXPECT_TRUE(id.member);
  EXPECT_EQ(id.residual, 0.0);

  // σσσ* = σ by direct multiplication.
  const CMatrix s = sigma(sig);
  EXPECT_LT((s * s * s.adjoint() - s).norm(), 1e-15);
  EXPECT_TRUE(is_member(s, sig).member);

  CMatrix bumped = CMatrix::Identity(3, 3);
  bumped(1, 0) += 1e-3;
  const auto r = is_member(bumped, sig, 1e-8);
  EXPECT_FALSE(r.member);
  EXPECT_GT(r.residual, 1e-4);

  EXPECT_THROW(is_member(CMatrix::Identity(2, 2), sig), DimensionMismatch);
}

TEST(IsMember, BlockResidualsLocalizeDefect) {
  const Signature sig(2, 3);
  CMatrix g = CMatrix::Identity(5, 5);
  g(4, 4) = 1.5; // (3,3) block diagonal entry
  const auto r = is_member(g, sig);
  EXPECT_FALSE(r.member);
  EXPECT_GT(r.block_residuals[2], 0.1); // (1,3) relation g11 g33* = e
  EXPECT_EQ(r.block_residuals[3], 0.0); // (2,2)
  EXPECT_EQ(r.block_residuals[5], 0.0); // (3,3)
}

TEST(RandomCompact, UnitaryAndMember) {
  Rng rng(3);
  for (int p = 1; p <= 3; ++p)
    for (int q = p; q <= 3; ++q) {
      const Signature sig(p, q);
      for (int t = 0; t < 20; ++t) {
        const auto k = random_compact(sig, rng);
        EXPECT_LT(unitarity_defect(k.matrix()), 1e-10);
        EXPECT_LT(is_member(k.matrix(), sig).residual, 1e-10);
        EXPECT_NEAR(std::abs(k.matrix().determinant()), 1.0, 1e-10);
      }
    }
}

TEST(RandomCompact, OneOneFamilyIsTwoDimensional) {
  // K ⊂ U(1,1) is U(1)×U(1): real dimension 1² + 1² = 2.
  EXPECT_EQ(lie_algebra_dimension(Signature(1, 1), LiePattern::compact), 2);
  Rng rng(8);
  const auto k = random_compact(Signature(1, 1), rng);
  EXPECT_EQ(k.matrix().rows(), 2);
}

TEST(InvolutionW, Properties) {
  for (int p = 1; p <= 3; ++p) {
    const Signature sig(p, p + 1);
    const auto w = involution_w(sig);
    EXPECT_EQ((w * w).matrix(), CMatrix::Identity(sig.n(), sig.n()));
    EXPECT_TRUE(is_member(w.matrix(), sig).member);
    EXPECT_EQ(unitarity_defect(w.matrix()), 0.0);
  }
}

TEST(LieAlgebraDimension, ClosedFormCounts) {
  EXPECT_EQ(lie_algebra_dimension(Signature(1, 2), LiePattern::full), 9);
  EXPECT_EQ(lie_algebra_dimension(Signature(1, 2), LiePattern::heisenberg), 3);
  EXPECT_EQ(lie_algebra_dimension(Signature(2, 2), LiePattern::iwasawa), 8);
  for (int p = 1; p <= 3; ++p)
    for (int q = p; q <= 3; ++q) {
      const Signature sig(p, q);
      EXPECT_EQ(lie_algebra_dimension(sig, LiePattern::full), (p + q) * (p + q));
      EXPECT_EQ(lie_algebra_dimension(sig, LiePattern::compact), p * p + q * q);
      EXPECT_EQ(lie_algebra_dimension(sig, LiePattern::heisenberg), p * (2 * q - p));
      EXPECT_EQ(lie_algebra_dimension(sig, LiePattern::iwasawa), 2 * p * q);
    }
}

TEST(Closure, ProductsAndInverses) {
  Rng rng(21);
  for (int p = 1; p <= 3; ++p)
    for (int q = p; q <= 3; ++q) {
      const Signature sig(p, q);
      for (int t = 0; t < 30; ++t) {
        const auto g1 = random_compact(sig, rng) * embed(random_iwasawa(sig, rng));
        const auto g2 = embed(random_iwasawa(sig, rng)) * random_compact(sig, rng);
        EXPECT_LT(is_member((g1 * g2).matrix(), sig).residual, 1e-8);
        EXPECT_LT(is_member(g1.inverse().matrix(), sig).residual, 1e-8);
        EXPECT_LT(max_abs_diff((g1 * g1.inverse()).matrix(), CMatrix::Identity(p + q, p + q)), 1e-10);
      }
    }
}

TEST(GroupElement, CheckedConstructionRejectsNonMembers) {
  const Signature sig(1, 2);
  EXPECT_THROW(GroupElement(sig, CMatrix::Identity(3, 3) * cplx(2.0)), InvalidInput);
  EXPECT_NO_THROW(GroupElement(sig, sigma(sig)));
}
