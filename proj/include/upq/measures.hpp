#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "upq/iwasawa.hpp"
#include "upq/stats.hpp"

namespace upq {

/// Radial cutoff δ ≤ |s| ≤ R, with |s|² = tr(ss*).
struct RadialWindow {
  double min = 1e-3;
  double max = 10.0;

  bool contains(double r) const { return r >= min && r <= max; }
};

void validate(const RadialWindow& w);

/// Real coordinates of a lower-triangular matrix with real diagonal: row by
/// row, the diagonal entry followed by (Re, Im) of each entry left of it.
RVector s_coordinates(const CMatrix& lower);
CMatrix s_from_coordinates(const RVector& v, int p);

/// |det| of X ↦ X·s₀ on lower-triangular matrices, from real_linear_det.
double right_translation_jacobian(const TriangularS& s0);

/// Closed form ∏ (s₀)_jj^{2p−2j+1}, j = 1…p.
double right_translation_jacobian_formula(const TriangularS& s0);

/// Area of the part of the unit sphere in the p² real coordinates where all
/// diagonal coordinates are positive: area(S^{p²−1}) / 2^p.
double positive_sphere_area(int p);

enum class MeasureKind { power_law, right_haar, custom };

std::string to_string(MeasureKind kind);

using WeightFunction = std::function<double(const TriangularS&)>;

/// f(s) = e^{−½|s|²}.
WeightFunction gaussian_weight();

struct WeightedPoint {
  TriangularS s;
  double weight; // importance weight, zero outside the window
};

/// Proposal for measures without an exact sampler: log-normal diagonal,
/// complex Gaussian below the diagonal.
struct ProposalConfig {
  double log_sigma = 1.0;
  double offdiag_scale = 1.0;
};

/// σ-finite measure on S with a density against the flat measure on the p²
/// real coordinates and an importance sampler on radial windows.
class MeasureOnS {
public:
  using Density = std::function<double(const TriangularS&)>;
  using Sampler = std::function<WeightedPoint(Rng&, const RadialWindow&)>;
  using WindowMass = std::function<double(const RadialWindow&)>;

  MeasureOnS(MeasureKind kind, Signature sig, Density density, Sampler sampler, WindowMass mass = {});

  MeasureKind kind() const { return kind_; }
  const Signature& sig() const { return sig_; }
  double density(const TriangularS& s) const { return density_(s); }
  WeightedPoint sample(Rng& rng, const RadialWindow& w) const { return sampler_(rng, w); }

  /// True when samples are exact draws from the normalized window restriction
  /// (constant weight equal to the window mass).
  bool exact_window_sampler() const { return static_cast<bool>(mass_); }
  double window_mass(const RadialWindow& w) const;

private:
  MeasureKind kind_;
  Signature sig_;
  Density density_;
  Sampler sampler_;
  WindowMass mass_;
};

/// dν(s) = |s|^{−p²} ds, sampled in polar form: log|s| uniform on the window,
/// direction uniform on the positive-diagonal part of the unit sphere.
MeasureOnS power_law_measure(const Signature& sig);

/// Frozen right-Haar exponents c_i = 2p − 2i + 1 (i = 1…p).
std::vector<int> right_haar_exponents(int p);

/// Least-squares fit of c in ∏ r_ii^{−c_i} from Jacobians of random right
/// translations; used to derive and re-check the frozen exponents.
RVector fit_right_haar_exponents(const Signature& sig, Rng& rng, int n_translations);

/// Right Haar measure ∏ r_ii^{−c_i} ds with the frozen exponents.
MeasureOnS right_haar_measure(const Signature& sig, const ProposalConfig& proposal = {});

MeasureOnS custom_measure(const Signature& sig, MeasureOnS::Density density,
                          const ProposalConfig& proposal = {});

/// dν(s·s₀)/dν(s) = density(s s₀)·J(s₀)/density(s).
double radon_nikodym(const MeasureOnS& nu, const TriangularS& s, const TriangularS& s0);

/// a(s) = √(μ(s)/ν(s)) with μ the right Haar density.
WeightFunction haar_reweight(const MeasureOnS& nu);

/// Importance-sampled ∫_window g dν.
MCEstimate integrate(const MeasureOnS& nu, const std::function<double(const TriangularS&)>& g,
                     const RadialWindow& window, long n_samples, std::uint64_t seed);

} // namespace upq
