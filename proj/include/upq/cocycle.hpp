#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "upq/bargmann.hpp"
#include "upq/measures.hpp"

namespace upq {

/// Fiber-valued function s ↦ F(s) on S.
using FiberFunction = std::function<BargmannVector(const TriangularS&)>;

/// (T(g)F)(s) = T^ε_{s s₀}(h₀)·F(s s₀) for g = S(s₀)N(h₀).
BargmannVector apply_special(const IwasawaElement& g, const FiberFunction& F, const TriangularS& s,
                             const SignVector& eps, const BasisPtr& basis);

/// b(p)(s) = (T(p) f·1)(s) − f(s)·1 with f = e^{−½|s|²}, evaluated
/// compositionally through rep_operator.
BargmannVector cocycle_fiber(const IwasawaElement& p, const TriangularS& s, const SignVector& eps,
                             const BasisPtr& basis, const WeightFunction& f = gaussian_weight());
BargmannVector cocycle_fiber(const IwasawaElement& p, const TriangularS& s, const SignVector& eps,
                             int max_degree);

/// ‖(T(g₁)T(g₂)1)(s) − (T(g₁g₂)1)(s)‖ with every operator truncated to
/// degree ≤ D; shrinks as D grows.
double group_law_residual(const IwasawaElement& g1, const IwasawaElement& g2, const TriangularS& s,
                          const SignVector& eps, int max_degree);

/// ‖b(g₁g₂)(s) − (T(g₁)b(g₂))(s) − b(g₁)(s)‖ on the degree-≤D space. The
/// middle term is computed on a basis padded by `pad` degrees and then
/// projected, since T(g₁) moves weight down from degrees above D.
double cocycle_identity_residual(const IwasawaElement& g1, const IwasawaElement& g2, const TriangularS& s,
                                 const SignVector& eps, int max_degree, int pad = 16);

/// Closed form for ε = (1,…,1): exp(tr(s a s*) − tr(w h)) − e^{−½|s|²} with
/// a = s₀(n₀ − ½z₀z₀* − ½)s₀*, h = z₀*s₀*s*, expanded on the basis.
BargmannVector cocycle_closed_form(const IwasawaElement& p, const TriangularS& s, const BasisPtr& basis);

struct GramConfig {
  RadialWindow window{1e-3, 10.0};
  long n_samples = 20000;
  std::uint64_t seed = 7;
  int max_degree = 10;
  int batches = 20;
};

struct GramEntry {
  cplx value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

/// Estimated inner products keyed by generator pairs, Hermitian by construction.
class GramCache {
public:
  std::optional<GramEntry> find(const IwasawaElement& a, const IwasawaElement& b) const;
  void insert(const IwasawaElement& a, const IwasawaElement& b, const GramEntry& e);
  std::size_t size() const { return entries_.size(); }

private:
  int index_of(const IwasawaElement& p) const;
  int intern(const IwasawaElement& p);

  std::vector<IwasawaElement> generators_;
  std::map<std::pair<int, int>, GramEntry> entries_;
};

/// ∫⟨b(p₁)(s), b(p₂)(s)⟩ dν(s) on the window. Throws NonFinite when the
/// diagonal keeps growing between R and 2R or the estimate is not finite.
GramEntry gram(const IwasawaElement& p1, const IwasawaElement& p2, const SignVector& eps,
               const MeasureOnS& nu, const GramConfig& cfg, GramCache* cache = nullptr);

struct GramMatrixEstimate {
  CMatrix gram;
  RMatrix std_error;
  std::vector<double> eigenvalues; // ascending
  double lambda_min = 0.0;
  double lambda_min_std_error = 0.0; // batch means
  long n_samples = 0;
  std::uint64_t seed = 0;
};

/// Gram matrix of b(p_i) from one shared sample set, and its spectrum.
GramMatrixEstimate gram_matrix(const std::vector<IwasawaElement>& generators, const SignVector& eps,
                               const MeasureOnS& nu, const GramConfig& cfg, GramCache* cache = nullptr);

/// Smallest Gram eigenvalue; positive values are evidence that the b(p_i)
/// are linearly independent.
GramMatrixEstimate injectivity_evidence(const std::vector<IwasawaElement>& generators,
                                        const SignVector& eps, const MeasureOnS& nu, const GramConfig& cfg);

/// Finite formal combination Σ λ_i b(p_i). Generators equal within
/// `kGeneratorTol` are merged; b(e) = 0 terms and zero coefficients are dropped.
class CocycleCombination {
public:
  using Term = std::pair<cplx, IwasawaElement>;
  static constexpr double kGeneratorTol = 1e-8;

  CocycleCombination() = default;
  static CocycleCombination generator(const IwasawaElement& p, cplx coeff = 1.0);

  void add(cplx coeff, const IwasawaElement& p);
  void add(const CocycleCombination& other, cplx scale = 1.0);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

private:
  void prune();
  std::vector<Term> terms_;
};

CocycleCombination operator+(const CocycleCombination& a, const CocycleCombination& b);
CocycleCombination operator-(const CocycleCombination& a, const CocycleCombination& b);

/// a − b reduces to the empty combination (coefficients within coeff_tol).
bool equivalent(const CocycleCombination& a, const CocycleCombination& b, double coeff_tol = 1e-9);

/// Σ λ_i b(p_i)(s).
BargmannVector evaluate(const CocycleCombination& v, const TriangularS& s, const SignVector& eps,
                        const BasisPtr& basis);

/// b(p) ↦ b(g p) − b(g).
CocycleCombination act_iwasawa(const IwasawaElement& g, const CocycleCombination& v);

/// b(p) ↦ b(p′) where k·p = p′·k′.
CocycleCombination act_compact(const GroupElement& k, const CocycleCombination& v);

/// g = p_g k_g, then act_iwasawa(p_g) ∘ act_compact(k_g).
CocycleCombination act_group(const GroupElement& g, const CocycleCombination& v);

/// B(g) = b(p) for g = p k; in particular B(k) = 0.
CocycleCombination extended_cocycle(const GroupElement& g);

} // namespace upq
