#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "upq/bargmann.hpp"
#include "upq/measures.hpp"

namespace upq {

/// One windowed quadrature result.
struct QuadratureReport {
  std::string condition;
  RadialWindow window;
  double estimate = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

/// Condition (i): ∫_{δ≤|s|≤R} f² dν for shrinking δ and the fitted slope
/// against log(1/δ).
struct GrowthReport {
  std::vector<QuadratureReport> levels;
  double slope = 0.0;
  double slope_std_error = 0.0;
};

/// Estimates on [δ, R] and [δ, 2R] from common samples.
struct WindowStability {
  QuadratureReport at_r;
  QuadratureReport at_2r;
  double ratio = 1.0;
  double ratio_std_error = 0.0;
  bool stable = true;
};

struct SpecialConditionsReport {
  GrowthReport growth;
  std::vector<WindowStability> translation; // (ii), one per test element
  std::vector<WindowStability> spherical;   // (iii), one per test element
};

struct SpecialConditionsConfig {
  long n_samples = 100000;
  std::uint64_t seed = 1;
  int growth_levels = 4;      // δ, δ/f, δ/f², …
  double growth_factor = 10.0;
  int batches = 20;
};

/// (i) growth of ∫ f² dν as δ → 0; (ii) ∫|f(ss₀) − f(s)|² dν with s₀ the
/// S-part of each test element; (iii) ∫(1 − Re φ_s^ε(n,z)) f² dν with (n,z)
/// its Heisenberg part. Throws NonFinite when (ii) or (iii) keeps growing
/// between R and 2R.
SpecialConditionsReport special_conditions(const MeasureOnS& nu, const WeightFunction& f,
                                           const SignVector& eps, const std::vector<IwasawaElement>& tests,
                                           const RadialWindow& window, const SpecialConditionsConfig& cfg = {});

/// Closed forms for p = 1, f = e^{−½|s|²}, ν = ds/s on the full half-line.
double translation_integral_p1(double s0);               // ½ log((1+s0²)²/(4 s0²))
double spherical_integral_p1(double theta, double z_norm_sq); // ½ log|1 + ½|z|² − iθ|
/// ∫_δ^R e^{−r²} dr/r = ½ (E1(δ²) − E1(R²)).
double growth_integral_p1(double delta, double r_max);

} // namespace upq
