#include "test_helpers.hpp"
#include "upq/characters.hpp"

using namespace upq;

TEST(SignVector, ParsesBothNotations) {
  EXPECT_EQ(parse_sign_vector("+,-,+"), SignVector({1, -1, 1}));
  EXPECT_EQ(parse_sign_vector("1, -1"), SignVector({1, -1}));
  EXPECT_EQ(to_string(parse_sign_vector("-1,+1")), "-,+");
  EXPECT_THROW(parse_sign_vector("+,0"), InvalidInput);
  EXPECT_THROW(SignVector({}), InvalidInput);
  EXPECT_TRUE(SignVector::all_plus(3).all_plus());
}

TEST(Character, ScalarCase) {
  // p = 1: χ(iθ) at s = r is exp(i ε θ r²).
  const Signature sig(1, 2);
  for (int e : {1, -1})
    for (double r : {0.3, 1.0, 2.5})
      for (double theta : {-1.2, 0.4}) {
        const TriangularS s(sig, CMatrix::Constant(1, 1, r));
        const cplx got = char_eval(SignVector({e}), s, CMatrix::Constant(1, 1, cplx(0, theta)));
        EXPECT_NEAR(std::abs(got - std::exp(cplx(0, e * theta * r * r))), 0.0, 1e-14);
      }
}

TEST(Character, UnitModulusAndMultiplicative) {
  Rng rng(11);
  const Signature sig(2, 3);
  const SignVector eps({1, -1});
  for (int t = 0; t < 50; ++t) {
    const auto s = random_triangular(sig, rng);
    const CMatrix a = random_skew_hermitian(2, rng, 1.0), b = random_skew_hermitian(2, rng, 1.0);
    const cplx ca = char_eval(eps, s, a), cb = char_eval(eps, s, b), cab = char_eval(eps, s, a + b);
    EXPECT_NEAR(std::abs(ca), 1.0, 1e-13);
    EXPECT_NEAR(std::abs(cab - ca * cb), 0.0, 1e-12);
  }
}

TEST(Character, SOrbitActsByConjugation) {
  // χ_s(n) = χ_1(s n s*).
  Rng rng(12);
  const Signature sig(2, 2);
  const SignVector eps({-1, 1});
  for (int t = 0; t < 20; ++t) {
    const auto s = random_triangular(sig, rng);
    const CMatrix n = random_skew_hermitian(2, rng, 1.0);
    const CMatrix moved = s.matrix() * n * s.matrix().adjoint();
    EXPECT_NEAR(std::abs(char_eval(eps, s, n) - char_eval(eps, TriangularS::identity(sig), moved)), 0.0, 1e-12);
  }
}

TEST(Character, RejectsBadArguments) {
  const Signature sig(2, 3);
  const auto s = TriangularS::identity(sig);
  EXPECT_THROW(char_eval(SignVector({1}), s, CMatrix::Zero(2, 2)), DimensionMismatch);
  EXPECT_THROW(char_eval(SignVector({1, 1}), s, CMatrix::Identity(2, 2)), NotSkewHermitian);
}

TEST(Character, DistinctSignsAreSeparated) {
  Rng rng(13);
  const Signature sig(2, 3);
  std::vector<std::pair<TriangularS, CMatrix>> samples;
  for (int t = 0; t < 10; ++t) samples.emplace_back(random_triangular(sig, rng), random_skew_hermitian(2, rng, 1.0));
  const std::vector<SignVector> all{SignVector({1, 1}), SignVector({1, -1}), SignVector({-1, 1}), SignVector({-1, -1})};
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) EXPECT_TRUE(orbit_separation(all[i], all[j], samples));
  EXPECT_THROW(orbit_separation(all[0], all[0], samples), InvalidInput);
}
