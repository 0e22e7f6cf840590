#include <cmath>

#include "test_helpers.hpp"
#include "upq/quasi_poisson.hpp"

using namespace upq;

namespace {

const Signature kSig(1, 2);

double e1(double x) { return -std::expint(-x); }

// ∫_δ^R e^{−c r²} dr/r.
double gauss_log(double c, double lo, double hi) { return 0.5 * (e1(c * lo * lo) - e1(c * hi * hi)); }

YFunction half_square() {
  return [](const TriangularS& s, double) { return 0.5 * s.norm_squared(); };
}

TriangularS scalar(double a) { return TriangularS(kSig, CMatrix::Constant(1, 1, a)); }

} // namespace

TEST(Triple, NeedsExactSampler) {
  EXPECT_THROW(make_qp_triple(right_haar_measure(Signature(2, 3)), half_square(), {0.1, 1.0}), InvalidInput);
  EXPECT_THROW(make_qp_triple(power_law_measure(kSig), half_square(), {0.1, 1.0}, -1.0), InvalidInput);
}

TEST(Quadrature, MassAndRenormalization) {
  const RadialWindow w{1e-3, 10.0};
  const auto t = make_qp_triple(power_law_measure(kSig), half_square(), w, 2.0);
  EXPECT_NEAR(window_intensity(t), 2.0 * std::log(1e4), 1e-10);
  EXPECT_NEAR(integrate_mu(t, [](const TriangularS&, double) { return 1.0; }), 2.0 * std::log(1e4), 1e-10);
  // x-dependence integrates against Lebesgue on [0,1).
  EXPECT_NEAR(integrate_mu(t, [](const TriangularS& s, double x) { return x * std::exp(-s.norm_squared()); }),
              2.0 * 0.5 * gauss_log(1.0, w.min, w.max), 1e-10);
  EXPECT_NEAR(log_renormalization(t), 2.0 * (std::log(1e4) - gauss_log(0.5, w.min, w.max)), 1e-10);
}

TEST(Quadrature, AngularAverageForPEqualsTwo) {
  // Radial integrands only see the window mass: ∫ dν = area·log(R/δ).
  const Signature sig(2, 3);
  const auto t = make_qp_triple(power_law_measure(sig), half_square(), {0.01, 10.0});
  EXPECT_NEAR(integrate_mu(t, [](const TriangularS&, double) { return 1.0; }) / window_intensity(t), 1.0, 1e-10);
}

TEST(Sampler, PoissonCountsAndCap) {
  const auto t = make_qp_triple(power_law_measure(kSig), half_square(), {0.1, 10.0});
  const ConfigurationSampler sampler(t);
  Rng rng(51);
  double sum = 0, sumsq = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const auto c = sampler.sample(rng);
    sum += c.points.size();
    sumsq += double(c.points.size()) * c.points.size();
    for (const auto& y : c.points) {
      EXPECT_GE(y.x, 0.0);
      EXPECT_LT(y.x, 1.0);
    }
    EXPECT_EQ(c.log_weight, sampler.log_weight());
  }
  const double mean = sum / n, var = sumsq / n - mean * mean, m = std::log(100.0);
  EXPECT_NEAR(sampler.mean_count(), m, 1e-12);
  EXPECT_LT(std::abs(mean - m), 4.0 * std::sqrt(m / n));
  EXPECT_LT(std::abs(var / m - 1.0), 0.1);
  EXPECT_THROW(ConfigurationSampler(t, {}, 1.0), WindowTooLarge);
}

TEST(CharacteristicFunctional, AgreesWithClosedForm) {
  const auto t = make_qp_triple(power_law_measure(kSig), half_square(), {1e-3, 10.0});
  const YFunction f = [](const TriangularS& s, double x) { return s.norm_squared() * (1.0 + x); };
  const auto cf = characteristic_functional_check(t, f, 20000, 52);
  EXPECT_TRUE(cf.agrees);
  EXPECT_LT(std::abs(cf.mc - cf.closed), 3.0 * cf.std_error);
  EXPECT_FALSE(cf.running.empty());
  // f = u gives exactly 1 with no Monte Carlo error.
  const auto one = characteristic_functional_check(t, half_square(), 1000, 53);
  EXPECT_NEAR(one.closed, 1.0, 1e-12);
}

TEST(Translation, MovesPointsAndFlagsExits) {
  const RadialWindow w{0.1, 2.0};
  Configuration c;
  c.points = {{scalar(1.0), 0.2}, {scalar(1.5), 0.7}};
  c.outside = {false, false};
  const StepCurrent<TriangularS> shift(CurrentVariant::triangular, {0.0, 0.5, 1.0}, {scalar(1.2), scalar(2.0)});
  const auto moved = translate_configuration(c, shift, w);
  ASSERT_EQ(moved.points.size(), 2u);
  EXPECT_NEAR(moved.points[0].s.matrix()(0, 0).real(), 1.2, 1e-15);
  EXPECT_FALSE(moved.outside[0]);
  EXPECT_NEAR(moved.points[1].s.matrix()(0, 0).real(), 3.0, 1e-15);
  EXPECT_TRUE(moved.outside[1]);
  EXPECT_EQ(moved.points[1].x, 0.7);
}

TEST(QuasiInvariance, RatioMatchesTranslationFactor) {
  const RadialWindow w{1e-3, 10.0};
  const auto t = make_qp_triple(power_law_measure(kSig), half_square(), w);
  const StepCurrent<TriangularS> shift(CurrentVariant::triangular, {0.0, 0.5, 1.0}, {scalar(1.3), scalar(0.8)});
  const double j2 = translation_factor(t, shift);
  // Independent value from the exponential integral, piece by piece.
  const double exact = std::exp(0.5 * (gauss_log(0.5 / (1.3 * 1.3), w.min, w.max) - gauss_log(0.5, w.min, w.max)) +
                                0.5 * (gauss_log(0.5 / (0.64), w.min, w.max) - gauss_log(0.5, w.min, w.max)));
  EXPECT_NEAR(j2, exact, 1e-9);
  EXPECT_NEAR(j2, std::sqrt(1.3 * 0.8), 1e-5); // window edge effect is O(δ²)

  const auto rep = quasi_invariance_estimate(t, shift, {{"u", half_square()}, {"zero", [](const TriangularS&, double) { return 0.0; }}},
                                             20000, 54);
  ASSERT_EQ(rep.entries.size(), 2u);
  EXPECT_LT(std::abs(rep.entries[0].ratio - j2), 3.0 * rep.entries[0].std_error);
  EXPECT_DOUBLE_EQ(rep.entries[1].ratio, 1.0);
  EXPECT_LT(std::abs(rep.mass_ratio.ratio - j2), 3.0 * rep.mass_ratio.std_error);
  EXPECT_TRUE(std::isfinite(rep.sup_ratio));
}
