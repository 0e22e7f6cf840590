#include <cmath>

#include "test_helpers.hpp"
#include "upq/current_group.hpp"

using namespace upq;
using upq::test::max_abs_diff;

namespace {

const Signature kSig(1, 2);

// e^{−u} = f² makes the vacuum the reference point: Φ(identity) = 1.
QPTriple vacuum_triple(const Signature& sig = kSig) {
  return make_qp_triple(power_law_measure(sig), [](const TriangularS& s, double) { return s.norm_squared(); },
                        {1e-3, 10.0});
}

IwasawaElement pure_n(double theta, cplx z) {
  return IwasawaElement::from_heisenberg(
      HeisenbergElement(kSig, CMatrix::Constant(1, 1, cplx(0, theta)), CMatrix::Constant(1, 1, z)));
}

PCurrent on_interval(const IwasawaElement& v, double a, double b) {
  const auto id = IwasawaElement::identity(v.sig());
  std::vector<double> br{0.0};
  std::vector<IwasawaElement> vals;
  if (a > 0.0) {
    br.push_back(a);
    vals.push_back(id);
  }
  vals.push_back(v);
  if (b < 1.0) {
    br.push_back(b);
    vals.push_back(id);
  }
  br.push_back(1.0);
  return PCurrent(CurrentVariant::iwasawa, br, vals);
}

GCurrent random_group_current(const Signature& sig, Rng& rng) {
  const int pieces = 1 + static_cast<int>(uniform01(rng) * 3.0);
  std::vector<double> br{0.0};
  for (int i = 1; i < pieces; ++i) br.push_back(static_cast<double>(i) / pieces);
  br.push_back(1.0);
  std::vector<GroupElement> vals;
  for (int i = 0; i < pieces; ++i) vals.push_back(embed(random_iwasawa(sig, rng)) * random_compact(sig, rng));
  return GCurrent(CurrentVariant::group, br, vals);
}

bool same_terms(const CocycleCombination& a, const CurrentCocycleCombination& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& [ca, pa] = a.terms()[i];
    const auto& [cb, pb] = b.terms()[i];
    if (ca != cb || pb.pieces() != 1) return false;
    if (coordinate_distance(pa, pb.values()[0]) != 0.0) return false;
  }
  return true;
}

} // namespace

TEST(Pairing, IdentityGivesSquaredWeight) {
  const auto nu = power_law_measure(kSig);
  const TriangularS s(kSig, CMatrix::Constant(1, 1, 1.3));
  EXPECT_NEAR(std::abs(pair_point(IwasawaElement::identity(kSig), s, SignVector::all_plus(1), nu) - std::exp(-1.69)), 0.0,
              1e-15);
  Configuration c;
  EXPECT_EQ(pair_against_vacuum(on_interval(pure_n(0.3, 0.2), 0.0, 1.0), c, SignVector::all_plus(1), nu), cplx(1.0));
}

TEST(Expectation, ClosedFormMatchesFrullani) {
  // ∫_0^∞ (e^{−c r²} − e^{−r²}) dr/r = ½ log(1/c), c = 1 + ½|z|² − iθ.
  const auto t = vacuum_triple();
  for (double theta : {0.0, 0.5, -0.9})
    for (cplx z : {cplx(0.0), cplx(0.4, -0.3)}) {
      const cplx c = 1.0 + 0.5 * std::norm(z) - cplx(0, theta);
      const cplx expected = std::exp(-0.5 * std::log(c));
      const cplx got = expectation_closed_form(on_interval(pure_n(theta, z), 0.0, 1.0), t, SignVector::all_plus(1));
      EXPECT_NEAR(std::abs(got - expected), 0.0, 1e-5);
    }
  EXPECT_NEAR(std::abs(expectation_closed_form(PCurrent::identity(CurrentVariant::iwasawa, kSig), t,
                                               SignVector::all_plus(1)) - 1.0), 0.0, 1e-12);
}

TEST(Expectation, MonteCarloAgreesWithClosedForm) {
  const auto t = vacuum_triple();
  const auto g = on_interval(pure_n(0.6, cplx(0.3, 0.2)), 0.2, 0.7);
  const auto mc = expectation_functional(g, t, SignVector::all_plus(1), {20000, 61, 1});
  const cplx exact = expectation_closed_form(g, t, SignVector::all_plus(1));
  EXPECT_LT(std::abs(mc.value - exact), 3.0 * mc.std_error);
  EXPECT_LE(std::abs(mc.value), 1.0 + 3.0 * mc.std_error);
  const auto id = expectation_functional(PCurrent::identity(CurrentVariant::iwasawa, kSig), t, SignVector::all_plus(1),
                                         {2000, 62, 1});
  EXPECT_EQ(id.value, cplx(1.0));
}

TEST(Expectation, FactorizesOverDisjointSupports) {
  const auto t = vacuum_triple();
  const auto g1 = on_interval(pure_n(0.4, cplx(0.2, 0.1)), 0.0, 0.3);
  const auto g2 = on_interval(pure_n(-0.7, cplx(0.0, 0.4)), 0.5, 0.9);
  const auto chk = factorization_check(g1, g2, t, SignVector::all_plus(1), {20000, 63, 1});
  EXPECT_TRUE(chk.agrees) << chk.deviation << " vs " << chk.combined_std_error;
  // The closed forms factorize exactly.
  const cplx c1 = expectation_closed_form(g1, t, SignVector::all_plus(1));
  const cplx c2 = expectation_closed_form(g2, t, SignVector::all_plus(1));
  const cplx c12 = expectation_closed_form(current_mul(g1, g2), t, SignVector::all_plus(1));
  EXPECT_NEAR(std::abs(c12 - c1 * c2), 0.0, 1e-12);
  EXPECT_THROW(factorization_check(g1, g1, t, SignVector::all_plus(1)), InvalidInput);
}

TEST(Support, MergesAdjacentPieces) {
  const auto a = pure_n(0.3, 0.0), b = pure_n(0.0, cplx(0.1));
  const auto id = IwasawaElement::identity(kSig);
  const PCurrent g(CurrentVariant::iwasawa, {0.0, 0.2, 0.4, 0.6, 1.0}, {id, a, b, id});
  const auto sup = support(g);
  ASSERT_EQ(sup.size(), 1u);
  EXPECT_EQ(sup[0], std::make_pair(0.2, 0.6));
  EXPECT_TRUE(disjoint_supports(g, on_interval(a, 0.6, 0.8)));
  EXPECT_FALSE(disjoint_supports(g, on_interval(a, 0.5, 0.8)));
  EXPECT_EQ(simplify(PCurrent(CurrentVariant::iwasawa, {0.0, 0.5, 1.0}, {a, a})).pieces(), 1u);
}

TEST(CurrentCombination, MergesAcrossPartitions) {
  const auto a = pure_n(0.3, cplx(0.2));
  const PCurrent split(CurrentVariant::iwasawa, {0.0, 0.5, 1.0}, {a, a});
  auto v = CurrentCocycleCombination::generator(PCurrent::constant(CurrentVariant::iwasawa, a), 2.0);
  v.add(-2.0, split);
  EXPECT_TRUE(v.empty());
  v.add(1.0, PCurrent::identity(CurrentVariant::iwasawa, kSig));
  EXPECT_TRUE(v.empty());
}

TEST(ConstantCurrents, ReproduceGroupLevelBitForBit) {
  Rng rng(64);
  for (const auto& sig : {Signature(1, 2), Signature(2, 3)}) {
    const auto g = random_iwasawa(sig, rng), p = random_iwasawa(sig, rng);
    const auto k = random_compact(sig, rng);
    const auto gp = embed(random_iwasawa(sig, rng)) * random_compact(sig, rng);
    const auto v = CocycleCombination::generator(p, cplx(0.5, 2.0));
    const auto cv = CurrentCocycleCombination::generator(PCurrent::constant(CurrentVariant::iwasawa, p), cplx(0.5, 2.0));
    EXPECT_TRUE(same_terms(act_iwasawa(g, v), act_current_iwasawa(PCurrent::constant(CurrentVariant::iwasawa, g), cv)));
    EXPECT_TRUE(same_terms(act_compact(k, v), act_current_compact(GCurrent::constant(CurrentVariant::compact, k), cv)));
    EXPECT_TRUE(same_terms(act_group(gp, v), act_current_group(GCurrent::constant(CurrentVariant::group, gp), cv)));
  }
}

TEST(CurrentAction, HomomorphismCenterAndLocality) {
  Rng rng(65);
  const Signature sig(1, 2);
  for (int t = 0; t < 5; ++t) {
    const auto g1 = random_group_current(sig, rng), g2 = random_group_current(sig, rng);
    const auto v = CurrentCocycleCombination::generator(
        PCurrent(CurrentVariant::iwasawa, {0.0, 0.4, 1.0}, {random_iwasawa(sig, rng), random_iwasawa(sig, rng)}));
    EXPECT_TRUE(equivalent(act_current_group(g1, act_current_group(g2, v)), act_current_group(current_mul(g1, g2), v)));
    EXPECT_TRUE(equivalent(act_current_group(GCurrent::constant(CurrentVariant::group, central_element(sig, 1.1)), v), v));
  }
  const auto a = on_interval(random_iwasawa(sig, rng), 0.0, 0.4), b = on_interval(random_iwasawa(sig, rng), 0.6, 1.0);
  const auto v = CurrentCocycleCombination::generator(on_interval(random_iwasawa(sig, rng), 0.2, 0.8));
  EXPECT_TRUE(equivalent(act_current_iwasawa(a, act_current_iwasawa(b, v)), act_current_iwasawa(b, act_current_iwasawa(a, v))));
}

TEST(CurrentAction, DecomposeReconstructs) {
  Rng rng(66);
  const auto g = random_group_current(Signature(2, 3), rng);
  const auto [p, k] = current_decompose(g);
  for (double x : {0.05, 0.45, 0.95})
    EXPECT_LT(max_abs_diff((embed(p.at(x)) * k.at(x)).matrix(), g.at(x).matrix()), 1e-10);
}
