#include <cmath>

#include "test_helpers.hpp"
#include "upq/cocycle.hpp"
#include "upq/special_conditions.hpp"

using namespace upq;
using upq::test::max_abs_diff;

namespace {

IwasawaElement pure_s(double s0) {
  return IwasawaElement::from_s(TriangularS(Signature(1, 2), CMatrix::Constant(1, 1, s0)));
}

} // namespace

TEST(Cocycle, FiberMatchesClosedForm) {
  Rng rng(41);
  for (const auto& sig : {Signature(1, 2), Signature(2, 3)}) {
    const auto basis = MultiIndexBasis::make(sig, sig.p == 1 ? 12 : 6);
    for (int t = 0; t < 10; ++t) {
      const auto p = random_iwasawa(sig, rng);
      const auto s = random_triangular(sig, rng);
      const auto b = cocycle_fiber(p, s, SignVector::all_plus(sig.p), basis);
      const auto c = cocycle_closed_form(p, s, basis);
      const int n = basis->block_size(basis->max_degree() / 2);
      EXPECT_LT(max_abs_diff(b.coeffs.head(n), c.coeffs.head(n)), 1e-10);
    }
  }
}

TEST(Cocycle, VanishesAtIdentity) {
  const Signature sig(1, 2);
  const auto b = cocycle_fiber(IwasawaElement::identity(sig), TriangularS::identity(sig), SignVector::all_plus(1), 8);
  EXPECT_EQ(b.norm(), 0.0);
}

TEST(Cocycle, PureTranslationIsScalar) {
  // b(s0)(s) = (f(s s0) − f(s))·1.
  const auto b = cocycle_fiber(pure_s(1.7), pure_s(0.8).s, SignVector::all_plus(1), 8);
  EXPECT_NEAR(std::abs(b.coeffs(0) - (std::exp(-0.5 * 0.8 * 0.8 * 1.7 * 1.7) - std::exp(-0.5 * 0.64))), 0.0, 1e-15);
  EXPECT_EQ(b.coeffs.tail(8).norm(), 0.0);
}

TEST(Cocycle, IdentityResidualIsSmall) {
  Rng rng(42);
  const Signature sig(1, 2);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const auto g1 = random_iwasawa(sig, rng), g2 = random_iwasawa(sig, rng);
    for (int k = 0; k < 5; ++k)
      worst = std::max(worst, cocycle_identity_residual(g1, g2, random_triangular(sig, rng), SignVector::all_plus(1), 10));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Cocycle, GroupLawResidualShrinksWithDegree) {
  Rng rng(43);
  const Signature sig(1, 2);
  const auto g1 = random_iwasawa(sig, rng), g2 = random_iwasawa(sig, rng);
  const auto s = random_triangular(sig, rng);
  double prev = INFINITY;
  for (int d : {6, 8, 10, 12}) {
    const double r = group_law_residual(g1, g2, s, SignVector::all_plus(1), d);
    EXPECT_LT(r, prev) << "D = " << d;
    prev = r;
  }
}

TEST(Combination, MergesAndPrunes) {
  Rng rng(44);
  const Signature sig(1, 2);
  const auto p = random_iwasawa(sig, rng), q = random_iwasawa(sig, rng);
  CocycleCombination v;
  v.add(2.0, p);
  v.add(cplx(0, 1), q);
  v.add(-2.0, p);
  v.add(5.0, IwasawaElement::identity(sig));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v.terms()[0].first, cplx(0, 1));
  EXPECT_TRUE(equivalent(v, CocycleCombination::generator(q, cplx(0, 1))));
  EXPECT_FALSE(equivalent(v, CocycleCombination::generator(q)));
  EXPECT_TRUE((v - v).empty());
}

TEST(Extension, HomomorphismOnGenerators) {
  Rng rng(45);
  for (const auto& sig : {Signature(1, 2), Signature(2, 2)}) {
    for (int t = 0; t < 10; ++t) {
      const auto g1 = embed(random_iwasawa(sig, rng)) * random_compact(sig, rng);
      const auto g2 = embed(random_iwasawa(sig, rng)) * random_compact(sig, rng);
      const auto v = CocycleCombination::generator(random_iwasawa(sig, rng), cplx(0.5, -1.0));
      EXPECT_TRUE(equivalent(act_group(g1, act_group(g2, v)), act_group(g1 * g2, v)));
      // B is a cocycle for the extended action: B(g1g2) = g1·B(g2) + B(g1).
      const auto lhs = extended_cocycle(g1 * g2);
      const auto rhs = act_group(g1, extended_cocycle(g2)) + extended_cocycle(g1);
      EXPECT_TRUE(equivalent(lhs, rhs));
    }
  }
}

TEST(Extension, CompactPartIsCoboundaryFree) {
  Rng rng(46);
  const Signature sig(2, 3);
  for (int t = 0; t < 10; ++t) EXPECT_TRUE(extended_cocycle(random_compact(sig, rng)).empty());
  EXPECT_TRUE(extended_cocycle(involution_w(sig)).empty());
  const auto p = random_iwasawa(sig, rng);
  EXPECT_TRUE(equivalent(extended_cocycle(embed(p)), CocycleCombination::generator(p)));
}

TEST(Extension, CenterActsTrivially) {
  Rng rng(47);
  const Signature sig(1, 3);
  const auto v = CocycleCombination::generator(random_iwasawa(sig, rng)) +
                 CocycleCombination::generator(random_iwasawa(sig, rng), 2.0);
  EXPECT_TRUE(equivalent(act_group(central_element(sig, 0.9), v), v));
}

TEST(Gram, PureTranslationDiagonal) {
  const auto nu = power_law_measure(Signature(1, 2));
  GramConfig cfg;
  cfg.n_samples = 20000;
  cfg.max_degree = 4;
  const auto e = gram(pure_s(1.5), pure_s(1.5), SignVector::all_plus(1), nu, cfg);
  // The window cuts off O(δ²) and O(e^{−R²/2}) of the full-line value.
  EXPECT_LT(std::abs(e.value.real() - translation_integral_p1(1.5)), 4.0 * e.std_error + 1e-5);
  EXPECT_EQ(e.value.imag(), 0.0);
}

TEST(Gram, CacheIsHermitianAndMatrixIsPositive) {
  Rng rng(48);
  const Signature sig(1, 2);
  const auto nu = power_law_measure(sig);
  GramConfig cfg;
  cfg.n_samples = 4000;
  cfg.max_degree = 8;
  std::vector<IwasawaElement> gens;
  for (int i = 0; i < 3; ++i) gens.push_back(random_iwasawa(sig, rng));
  GramCache cache;
  const auto g = gram_matrix(gens, SignVector::all_plus(1), nu, cfg, &cache);
  EXPECT_LT(max_abs_diff(g.gram, g.gram.adjoint()), 1e-14);
  const auto hit = cache.find(gens[1], gens[0]);
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(std::abs(hit->value - g.gram(1, 0)), 0.0, 1e-14);
  EXPECT_GT(g.lambda_min, 3.0 * g.lambda_min_std_error);
  ASSERT_EQ(g.eigenvalues.size(), 3u);
  EXPECT_LE(g.eigenvalues[0], g.eigenvalues[2]);
}
