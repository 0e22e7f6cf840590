#include "upq/cocycle.hpp"

#include <algorithm>
#include <cmath>

namespace upq {

// --- fiber evaluation ------------------------------------------------------

BargmannVector apply_special(const IwasawaElement& g, const FiberFunction& F, const TriangularS& s,
                             const SignVector& eps, const BasisPtr& basis) {
  const TriangularS moved = s * g.s;
  return rep_operator(eps, moved, g.h, basis).apply(F(moved));
}

BargmannVector cocycle_fiber(const IwasawaElement& p, const TriangularS& s, const SignVector& eps,
                             const BasisPtr& basis, const WeightFunction& f) {
  const FiberFunction reference = [&](const TriangularS& t) { return cplx(f(t)) * BargmannVector::vacuum(basis); };
  return apply_special(p, reference, s, eps, basis) - reference(s);
}

BargmannVector cocycle_fiber(const IwasawaElement& p, const TriangularS& s, const SignVector& eps,
                             int max_degree) {
  return cocycle_fiber(p, s, eps, MultiIndexBasis::make(p.sig(), max_degree));
}

double group_law_residual(const IwasawaElement& g1, const IwasawaElement& g2, const TriangularS& s,
                          const SignVector& eps, int max_degree) {
  const auto basis = MultiIndexBasis::make(g1.sig(), max_degree);
  const FiberFunction vac = [&](const TriangularS&) { return BargmannVector::vacuum(basis); };
  const FiberFunction inner = [&](const TriangularS& t) { return apply_special(g2, vac, t, eps, basis); };
  return (apply_special(p_mul(g1, g2), vac, s, eps, basis) - apply_special(g1, inner, s, eps, basis)).norm();
}

double cocycle_identity_residual(const IwasawaElement& g1, const IwasawaElement& g2, const TriangularS& s,
                                 const SignVector& eps, int max_degree, int pad) {
  const auto basis = MultiIndexBasis::make(g1.sig(), max_degree);
  const auto big = MultiIndexBasis::make(g1.sig(), max_degree + std::max(0, pad));
  const FiberFunction b2 = [&](const TriangularS& t) { return cocycle_fiber(g2, t, eps, big); };
  const auto d = cocycle_fiber(p_mul(g1, g2), s, eps, basis) - project(apply_special(g1, b2, s, eps, big), basis) -
                 cocycle_fiber(g1, s, eps, basis);
  return d.norm();
}

BargmannVector cocycle_closed_form(const IwasawaElement& p, const TriangularS& s, const BasisPtr& basis) {
  const Signature& sig = p.sig();
  const CMatrix& s0 = p.s.matrix();
  const CMatrix& z0 = p.h.z();
  const CMatrix a = s0 * (p.h.n() - 0.5 * z0 * z0.adjoint() - 0.5 * CMatrix::Identity(sig.p, sig.p)) *
                    s0.adjoint();
  const cplx lead = std::exp((s.matrix() * a * s.matrix().adjoint()).trace());
  const CMatrix h = z0.adjoint() * s0.adjoint() * s.matrix().adjoint(); // (q−p)×p
  BargmannVector out = BargmannVector::zero(basis);
  for (int pos = 0; pos < basis->size(); ++pos) {
    const auto& k = basis->index(pos);
    cplx c = lead;
    for (int v = 0; v < basis->n_vars(); ++v) {
      const int i = v / sig.mid(), j = v % sig.mid();
      const int e = k[static_cast<std::size_t>(v)];
      for (int t = 1; t <= e; ++t) c *= -h(j, i) / std::sqrt(static_cast<double>(t));
    }
    out.coeffs(pos) = c;
  }
  out.coeffs(0) -= std::exp(-0.5 * s.norm_squared());
  return out;
}

// --- Gram estimates --------------------------------------------------------

int GramCache::index_of(const IwasawaElement& p) const {
  for (std::size_t i = 0; i < generators_.size(); ++i)
    if (approx_equal(generators_[i], p, CocycleCombination::kGeneratorTol)) return static_cast<int>(i);
  return -1;
}

int GramCache::intern(const IwasawaElement& p) {
  const int i = index_of(p);
  if (i >= 0) return i;
  generators_.push_back(p);
  return static_cast<int>(generators_.size()) - 1;
}

std::optional<GramEntry> GramCache::find(const IwasawaElement& a, const IwasawaElement& b) const {
  const int i = index_of(a), j = index_of(b);
  if (i < 0 || j < 0) return std::nullopt;
  if (auto it = entries_.find({i, j}); it != entries_.end()) return it->second;
  if (auto it = entries_.find({j, i}); it != entries_.end()) {
    GramEntry e = it->second;
    e.value = std::conj(e.value);
    return e;
  }
  return std::nullopt;
}

void GramCache::insert(const IwasawaElement& a, const IwasawaElement& b, const GramEntry& e) {
  const int i = intern(a), j = intern(b);
  GramEntry stored = e;
  if (i == j) stored.value = cplx(std::max(0.0, e.value.real()), 0.0);
  entries_[{i, j}] = stored;
}

GramMatrixEstimate gram_matrix(const std::vector<IwasawaElement>& gens, const SignVector& eps,
                               const MeasureOnS& nu, const GramConfig& cfg, GramCache* cache) {
  if (gens.empty()) throw InvalidInput("gram_matrix needs at least one generator");
  validate(cfg.window);
  const int m = static_cast<int>(gens.size());
  const auto basis = MultiIndexBasis::make(gens.front().sig(), cfg.max_degree);
  const RadialWindow doubled{cfg.window.min, 2.0 * cfg.window.max};
  Rng rng = make_stream(cfg.seed, 11);

  const int nb = std::max(1, cfg.batches);
  std::vector<CMatrix> batch(static_cast<std::size_t>(nb), CMatrix::Zero(m, m));
  CMatrix sum = CMatrix::Zero(m, m), tail = CMatrix::Zero(m, m);
  RMatrix sum_sq_re = RMatrix::Zero(m, m), sum_sq_im = RMatrix::Zero(m, m);
  RVector tail_sq = RVector::Zero(m);
  const long n = cfg.n_samples;
  std::vector<BargmannVector> fibers;
  for (long t = 0; t < n; ++t) {
    const auto pt = nu.sample(rng, doubled);
    CMatrix g = CMatrix::Zero(m, m);
    if (pt.weight != 0.0) {
      fibers.clear();
      for (const auto& p : gens) fibers.push_back(cocycle_fiber(p, pt.s, eps, basis));
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
          g(i, j) = pt.weight * fibers[static_cast<std::size_t>(i)].inner(fibers[static_cast<std::size_t>(j)]);
          g(j, i) = std::conj(g(i, j));
        }
    }
    if (std::sqrt(pt.s.norm_squared()) > cfg.window.max) {
      tail += g;
      for (int i = 0; i < m; ++i) tail_sq(i) += std::norm(g(i, i));
      continue;
    }
    sum += g;
    sum_sq_re += g.real().cwiseAbs2();
    sum_sq_im += g.imag().cwiseAbs2();
    batch[static_cast<std::size_t>(t * nb / n)] += g;
  }

  GramMatrixEstimate out;
  out.n_samples = n;
  out.seed = cfg.seed;
  const double dn = static_cast<double>(n);
  out.gram = sum / dn;
  out.std_error = RMatrix(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double vr = sum_sq_re(i, j) / dn - std::pow(out.gram(i, j).real(), 2);
      const double vi = sum_sq_im(i, j) / dn - std::pow(out.gram(i, j).imag(), 2);
      out.std_error(i, j) = std::sqrt(std::max(0.0, vr + vi) / std::max(1.0, dn - 1.0));
    }
  if (!out.gram.allFinite()) throw NonFinite("Gram estimate is not finite");
  for (int i = 0; i < m; ++i) {
    const double tv = tail(i, i).real() / dn;
    const double tse = std::sqrt(std::max(0.0, tail_sq(i) / dn - tv * tv) / std::max(1.0, dn - 1.0));
    if (tv > 5.0 * tse && tv > 1e-3 * std::max(1e-12, out.gram(i, i).real()))
      throw NonFinite("Gram diagonal keeps growing with the window (generator " + std::to_string(i) + ")");
  }

  Eigen::SelfAdjointEigenSolver<CMatrix> es(out.gram, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  out.lambda_min = out.eigenvalues.front();
  if (nb > 1) {
    std::vector<double> mins;
    for (int b = 0; b < nb; ++b) {
      const double len = static_cast<double>(n * (b + 1) / nb - n * b / nb);
      Eigen::SelfAdjointEigenSolver<CMatrix> eb(batch[static_cast<std::size_t>(b)] / len, Eigen::EigenvaluesOnly);
      mins.push_back(eb.eigenvalues()(0));
    }
    out.lambda_min_std_error = mean_estimate(mins).std_error;
  }
  if (cache)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        cache->insert(gens[static_cast<std::size_t>(i)], gens[static_cast<std::size_t>(j)],
                      {out.gram(i, j), out.std_error(i, j), n, cfg.seed});
  return out;
}

GramEntry gram(const IwasawaElement& p1, const IwasawaElement& p2, const SignVector& eps,
               const MeasureOnS& nu, const GramConfig& cfg, GramCache* cache) {
  if (cache)
    if (auto hit = cache->find(p1, p2)) return *hit;
  const auto est = gram_matrix({p1, p2}, eps, nu, cfg, cache);
  return {est.gram(0, 1), est.std_error(0, 1), est.n_samples, est.seed};
}

GramMatrixEstimate injectivity_evidence(const std::vector<IwasawaElement>& gens, const SignVector& eps,
                                        const MeasureOnS& nu, const GramConfig& cfg) {
  return gram_matrix(gens, eps, nu, cfg);
}

// --- formal combinations ---------------------------------------------------

CocycleCombination CocycleCombination::generator(const IwasawaElement& p, cplx coeff) {
  CocycleCombination c;
  c.add(coeff, p);
  return c;
}

void CocycleCombination::add(cplx coeff, const IwasawaElement& p) {
  if (approx_equal(p, IwasawaElement::identity(p.sig()), kGeneratorTol)) return; // b(e) = 0
  for (auto& [c, q] : terms_)
    if (approx_equal(q, p, kGeneratorTol)) {
      c += coeff;
      prune();
      return;
    }
  terms_.emplace_back(coeff, p);
  prune();
}

void CocycleCombination::add(const CocycleCombination& other, cplx scale) {
  for (const auto& [c, p] : other.terms_) add(scale * c, p);
}

void CocycleCombination::prune() {
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return std::abs(t.first) <= 1e-12; }),
               terms_.end());
}

CocycleCombination operator+(const CocycleCombination& a, const CocycleCombination& b) {
  CocycleCombination out = a;
  out.add(b);
  return out;
}

CocycleCombination operator-(const CocycleCombination& a, const CocycleCombination& b) {
  CocycleCombination out = a;
  out.add(b, -1.0);
  return out;
}

bool equivalent(const CocycleCombination& a, const CocycleCombination& b, double coeff_tol) {
  const auto d = a - b;
  return std::all_of(d.terms().begin(), d.terms().end(),
                     [&](const auto& t) { return std::abs(t.first) <= coeff_tol; });
}

BargmannVector evaluate(const CocycleCombination& v, const TriangularS& s, const SignVector& eps,
                        const BasisPtr& basis) {
  BargmannVector out = BargmannVector::zero(basis);
  for (const auto& [c, p] : v.terms()) out = out + c * cocycle_fiber(p, s, eps, basis);
  return out;
}

CocycleCombination act_iwasawa(const IwasawaElement& g, const CocycleCombination& v) {
  CocycleCombination out;
  cplx total = 0.0;
  for (const auto& [c, p] : v.terms()) {
    out.add(c, p_mul(g, p));
    total += c;
  }
  out.add(-total, g);
  return out;
}

CocycleCombination act_compact(const GroupElement& k, const CocycleCombination& v) {
  CocycleCombination out;
  for (const auto& [c, p] : v.terms()) out.add(c, k_conjugate(k, p).p);
  return out;
}

CocycleCombination act_group(const GroupElement& g, const CocycleCombination& v) {
  const auto [p, k] = iwasawa_decompose(g);
  return act_iwasawa(p, act_compact(k, v));
}

CocycleCombination extended_cocycle(const GroupElement& g) {
  return CocycleCombination::generator(iwasawa_decompose(g).p);
}

} // namespace upq
