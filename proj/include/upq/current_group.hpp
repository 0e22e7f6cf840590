#pragma once

#include <utility>
#include <vector>

#include "upq/bargmann.hpp"
#include "upq/cocycle.hpp"
#include "upq/quasi_poisson.hpp"
#include "upq/stats.hpp"
#include "upq/step_current.hpp"

namespace upq {

using SCurrent = StepCurrent<TriangularS>;
using PCurrent = StepCurrent<IwasawaElement>;
using GCurrent = StepCurrent<GroupElement>;

/// Rule (s, x) ↦ fiber vector; the vacuum rule is f(s)·1 with f = e^{−½|s|²}.
struct FactorizedVector {
  std::function<BargmannVector(const TriangularS&, double)> rule;

  static FactorizedVector vacuum(const BasisPtr& basis, const WeightFunction& f = gaussian_weight());
  BargmannVector at(const YPoint& y) const { return rule(y.s, y.x); }
};

/// ⟨(g·f)(s), f(s)⟩ for one fiber: the S-part moves s to s·s₀ with the
/// √(dν(ss₀)/dν(s)) weight, the N-part acts by the Bargmann operator there.
cplx pair_point(const IwasawaElement& g, const TriangularS& s, const SignVector& eps, const MeasureOnS& nu,
                const WeightFunction& f = gaussian_weight());

/// ∏ over ω of pair_point(g̃(x), s)/f(s)²; equals 1 for the identity current
/// or an empty configuration.
cplx pair_against_vacuum(const PCurrent& g, const Configuration& omega, const SignVector& eps,
                         const MeasureOnS& nu, const WeightFunction& f = gaussian_weight());

struct ExpectationConfig {
  long n_samples = 20000;
  std::uint64_t seed = 5;
  std::uint64_t stream = 41;
};

/// Φ(g̃) = exp(∫_window (⟨Ũ(g̃)v, v⟩ − e^{−u}) dμ) with v the vacuum rule,
/// estimated as E ∏ pair/e^{−u} over the Poisson process of intensity e^{−u}μ
/// (thinned from μ). Points falling in the doubled window's outer shell
/// feed a divergence check that throws NonFinite.
ComplexEstimate expectation_functional(const PCurrent& g, const QPTriple& t, const SignVector& eps,
                                       const ExpectationConfig& cfg = {});

/// The same functional by deterministic quadrature (p = 1 exact up to
/// rounding, p > 1 via the fixed angular average).
cplx expectation_closed_form(const PCurrent& g, const QPTriple& t, const SignVector& eps, MuQuadrature q = {});

/// Pointwise-product identity check for currents with disjoint supports,
/// using independent seeds for the three estimates.
struct FactorizationCheck {
  ComplexEstimate phi1, phi2, phi12;
  double deviation = 0.0;
  double combined_std_error = 0.0;
  bool agrees = false;
};

FactorizationCheck factorization_check(const PCurrent& g1, const PCurrent& g2, const QPTriple& t,
                                       const SignVector& eps, const ExpectationConfig& cfg = {});

/// Support of a P-current: union of pieces whose value is not the identity.
std::vector<std::pair<double, double>> support(const PCurrent& g, double tol = 1e-12);
bool disjoint_supports(const PCurrent& a, const PCurrent& b, double tol = 1e-12);

/// Finite formal combination Σ c_i b(p̃_i) of current-level cocycle vectors.
/// Generators are kept in simplified form; identity currents are dropped.
class CurrentCocycleCombination {
public:
  using Term = std::pair<cplx, PCurrent>;
  static constexpr double kGeneratorTol = CocycleCombination::kGeneratorTol;

  static CurrentCocycleCombination generator(const PCurrent& p, cplx coeff = 1.0);

  void add(cplx coeff, const PCurrent& p);
  void add(const CurrentCocycleCombination& other, cplx scale = 1.0);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

private:
  void prune();
  std::vector<Term> terms_;
};

CurrentCocycleCombination operator+(const CurrentCocycleCombination& a, const CurrentCocycleCombination& b);
CurrentCocycleCombination operator-(const CurrentCocycleCombination& a, const CurrentCocycleCombination& b);
bool equivalent(const CurrentCocycleCombination& a, const CurrentCocycleCombination& b, double coeff_tol = 1e-9);

/// Merges equal adjacent pieces.
PCurrent simplify(const PCurrent& g, double tol = CurrentCocycleCombination::kGeneratorTol);
bool approx_equal(const PCurrent& a, const PCurrent& b, double tol = CurrentCocycleCombination::kGeneratorTol);
bool is_identity(const PCurrent& g, double tol = CurrentCocycleCombination::kGeneratorTol);

/// b(g̃p̃) − b(g̃) for each generator, weighted (cocycle identity).
CurrentCocycleCombination act_current_iwasawa(const PCurrent& g, const CurrentCocycleCombination& v);
/// Relabeling b(p̃) ↦ b(p̃′) with k̃(x)p̃(x) = p̃′(x)k̃′(x) pointwise.
CurrentCocycleCombination act_current_compact(const GCurrent& k, const CurrentCocycleCombination& v);
/// Pointwise Iwasawa factorization g̃ = p̃k̃, then the compact part, then the P part.
CurrentCocycleCombination act_current_group(const GCurrent& g, const CurrentCocycleCombination& v);

/// Pointwise Iwasawa factorization of a group-valued current.
std::pair<PCurrent, GCurrent> current_decompose(const GCurrent& g);

} // namespace upq
