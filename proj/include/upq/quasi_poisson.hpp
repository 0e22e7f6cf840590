#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "upq/measures.hpp"
#include "upq/step_current.hpp"

namespace upq {

/// Point (s, x) of Y = S × X with X = [0,1).
struct YPoint {
  TriangularS s;
  double x;
};

/// Finite configuration inside a window. `outside` flags points that a
/// translation moved out of the window.
struct Configuration {
  std::vector<YPoint> points;
  std::vector<bool> outside;
  double log_weight = 0.0; // c_R: the windowed measure is e^{c_R}·Poisson
};

using YFunction = std::function<double(const TriangularS&, double)>;

/// Intensity μ = λ·ν × Lebesgue on [0,1), the function u ≥ 0, and the radial
/// window on the S factor. ν must have an exact window sampler.
struct QPTriple {
  MeasureOnS nu;
  YFunction u;
  RadialWindow window;
  double intensity = 1.0;
};

QPTriple make_qp_triple(MeasureOnS nu, YFunction u, RadialWindow window, double intensity = 1.0);

/// μ(window).
double window_intensity(const QPTriple& t);

/// Settings for deterministic quadrature of ∫_window g dμ: composite
/// Gauss–Legendre in log|s| and in x, averaged over fixed-seed directions
/// when p > 1.
struct MuQuadrature {
  int nodes = 12;
  double max_log_width = 0.5;
  std::vector<double> r_breaks;
  std::vector<double> x_breaks;
  int directions = 512;
  std::uint64_t direction_seed = 20240611;
};

double integrate_mu(const QPTriple& t, const YFunction& g, const MuQuadrature& q = {});

/// c_R = ∫_window (1 − e^{−u}) dμ.
double log_renormalization(const QPTriple& t, const MuQuadrature& q = {});

inline constexpr double kMaxExpectedPoints = 1e5;

/// Poisson(μ restricted to the window) sampler with c_R attached. Throws
/// WindowTooLarge when μ(window) exceeds the cap.
class ConfigurationSampler {
public:
  explicit ConfigurationSampler(QPTriple t, const MuQuadrature& q = {}, double cap = kMaxExpectedPoints);

  Configuration sample(Rng& rng) const;
  const QPTriple& triple() const { return t_; }
  double mean_count() const { return mass_; }
  double log_weight() const { return c_r_; }

private:
  QPTriple t_;
  double mass_;
  double c_r_;
};

Configuration sample_configuration(const QPTriple& t, Rng& rng);

struct CFCheck {
  double mc = 0.0;
  double closed = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
  bool agrees = false; // within 3 standard errors
  std::vector<std::pair<long, double>> running; // (n, mc after n samples) at powers of two
};

/// e^{c_R}·E[exp(−Σ f)] against exp(∫_window (e^{−f} − e^{−u}) dμ).
CFCheck characteristic_functional_check(const QPTriple& t, const YFunction& f, long n_samples,
                                        std::uint64_t seed, const MuQuadrature& q = {});

/// (s, x) ↦ (s·s̃(x), x); points leaving the window are flagged.
Configuration translate_configuration(const Configuration& w, const StepCurrent<TriangularS>& shift,
                                      const RadialWindow& window);

struct NamedTest {
  std::string name;
  YFunction f;
};

struct RatioEntry {
  std::string name;
  double ratio = 1.0;
  double std_error = 0.0;
};

struct QuasiInvarianceReport {
  std::vector<RatioEntry> entries;
  /// f ≡ 0: total mass of the translated windowed measure over the original,
  /// with both renormalizations estimated from e^{−c} = E[exp(−Σu)]; i.e.
  /// E[exp(−Σu(y))] / E[exp(−Σu(y·s̃(x)))]. Tends to the quadrature J₂.
  RatioEntry mass_ratio{"mass", 1.0, 0.0};
  double sup_ratio = 1.0; // estimate of the bound c(s̃)
  long n_samples = 0;
  std::uint64_t seed = 0;
};

/// For each f: E[exp(−Σ f(s·s̃(x)⁻¹, x))] / E[exp(−Σ f(s, x))] under the
/// windowed measure, from shared samples (delta-method error). At f = u this
/// is the windowed J₂; at f ≡ 0 it is 1 by construction, which is why the
/// mass ratio is reported separately.
QuasiInvarianceReport quasi_invariance_estimate(const QPTriple& t, const StepCurrent<TriangularS>& shift,
                                                const std::vector<NamedTest>& tests, long n_samples,
                                                std::uint64_t seed);

/// exp(∫_window (e^{−u(s·s̃(x)⁻¹, x)} − e^{−u(s,x)}) dμ), the value of the ratio
/// at f = u.
double translation_factor(const QPTriple& t, const StepCurrent<TriangularS>& shift, MuQuadrature q = {});

} // namespace upq
