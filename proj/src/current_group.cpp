#include "upq/current_group.hpp"

#include <algorithm>
#include <cmath>

namespace upq {

FactorizedVector FactorizedVector::vacuum(const BasisPtr& basis, const WeightFunction& f) {
  return {[basis, f](const TriangularS& s, double) { return cplx(f(s)) * BargmannVector::vacuum(basis); }};
}

cplx pair_point(const IwasawaElement& g, const TriangularS& s, const SignVector& eps, const MeasureOnS& nu,
                const WeightFunction& f) {
  const TriangularS moved = s * g.s;
  const double jac = std::sqrt(radon_nikodym(nu, s, g.s));
  return jac * f(moved) * f(s) * rep_scalar(eps, moved, g.h);
}

cplx pair_against_vacuum(const PCurrent& g, const Configuration& omega, const SignVector& eps,
                         const MeasureOnS& nu, const WeightFunction& f) {
  cplx prod = 1.0;
  for (const auto& y : omega.points) {
    const double fs = f(y.s);
    prod *= pair_point(g.at(y.x), y.s, eps, nu, f) / (fs * fs);
  }
  return prod;
}

ComplexEstimate expectation_functional(const PCurrent& g, const QPTriple& t, const SignVector& eps,
                                       const ExpectationConfig& cfg) {
  QPTriple doubled = t;
  doubled.window.max = 2.0 * t.window.max;
  const ConfigurationSampler sampler(doubled);
  const WeightFunction f = gaussian_weight();
  Rng rng = make_stream(cfg.seed, cfg.stream);

  std::vector<cplx> inner(static_cast<std::size_t>(cfg.n_samples)), shell(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const auto c = sampler.sample(rng);
    cplx in = 1.0, out = 1.0;
    for (const auto& y : c.points) {
      const double keep = std::exp(-t.u(y.s, y.x));
      if (uniform01(rng) >= keep) continue;
      const cplx h = pair_point(g.at(y.x), y.s, eps, t.nu, f) / keep;
      if (t.window.contains(std::sqrt(y.s.norm_squared())))
        in *= h;
      else
        out *= h;
    }
    inner[i] = in;
    shell[i] = in * (out - 1.0);
  }
  const auto est = mean_estimate(inner);
  if (!std::isfinite(est.value.real()) || !std::isfinite(est.value.imag()))
    throw NonFinite("current-group expectation is not finite");
  const auto drift = mean_estimate(shell);
  if (std::abs(drift.value) > 5.0 * drift.std_error && std::abs(drift.value) > 1e-3 * std::abs(est.value))
    throw NonFinite("current-group expectation changes as the window doubles");
  ComplexEstimate out = est;
  out.seed = cfg.seed;
  return out;
}

cplx expectation_closed_form(const PCurrent& g, const QPTriple& t, const SignVector& eps, MuQuadrature q) {
  const WeightFunction f = gaussian_weight();
  q.x_breaks.insert(q.x_breaks.end(), g.breaks().begin(), g.breaks().end());
  auto part = [&](bool imag) {
    return integrate_mu(t, [&](const TriangularS& s, double x) {
      const cplx v = pair_point(g.at(std::min(x, std::nextafter(1.0, 0.0))), s, eps, t.nu, f) -
                     std::exp(-t.u(s, x));
      return imag ? v.imag() : v.real();
    }, q);
  };
  return std::exp(cplx(part(false), part(true)));
}

std::vector<std::pair<double, double>> support(const PCurrent& g, double tol) {
  std::vector<std::pair<double, double>> out;
  const auto id = IwasawaElement::identity(g.sig());
  for (std::size_t i = 0; i < g.pieces(); ++i) {
    if (approx_equal(g.values()[i], id, tol)) continue;
    const double a = g.breaks()[i], b = g.breaks()[i + 1];
    if (!out.empty() && out.back().second == a)
      out.back().second = b;
    else
      out.emplace_back(a, b);
  }
  return out;
}

bool disjoint_supports(const PCurrent& a, const PCurrent& b, double tol) {
  for (const auto& [a0, a1] : support(a, tol))
    for (const auto& [b0, b1] : support(b, tol))
      if (std::max(a0, b0) < std::min(a1, b1)) return false;
  return true;
}

FactorizationCheck factorization_check(const PCurrent& g1, const PCurrent& g2, const QPTriple& t,
                                       const SignVector& eps, const ExpectationConfig& cfg) {
  if (!disjoint_supports(g1, g2)) throw InvalidInput("factorization check needs disjoint supports");
  FactorizationCheck out;
  ExpectationConfig c = cfg;
  c.stream = cfg.stream;
  out.phi1 = expectation_functional(g1, t, eps, c);
  c.stream = cfg.stream + 1;
  out.phi2 = expectation_functional(g2, t, eps, c);
  c.stream = cfg.stream + 2;
  out.phi12 = expectation_functional(current_mul(g1, g2), t, eps, c);
  const cplx prod = out.phi1.value * out.phi2.value;
  out.deviation = std::abs(out.phi12.value - prod);
  out.combined_std_error = std::sqrt(std::pow(out.phi12.std_error, 2) +
                                     std::norm(out.phi2.value) * std::pow(out.phi1.std_error, 2) +
                                     std::norm(out.phi1.value) * std::pow(out.phi2.std_error, 2));
  out.agrees = out.deviation <= 3.0 * out.combined_std_error + 1e-12;
  return out;
}

// --- formal combinations over currents --------------------------------------

PCurrent simplify(const PCurrent& g, double tol) {
  return simplify(g, [tol](const IwasawaElement& a, const IwasawaElement& b) { return approx_equal(a, b, tol); });
}

bool approx_equal(const PCurrent& a, const PCurrent& b, double tol) {
  if (!(a.sig() == b.sig())) return false;
  const auto breaks = common_refinement(a.breaks(), b.breaks());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    if (!approx_equal(a.at(mid), b.at(mid), tol)) return false;
  }
  return true;
}

bool is_identity(const PCurrent& g, double tol) { return support(g, tol).empty(); }

CurrentCocycleCombination CurrentCocycleCombination::generator(const PCurrent& p, cplx coeff) {
  CurrentCocycleCombination c;
  c.add(coeff, p);
  return c;
}

void CurrentCocycleCombination::add(cplx coeff, const PCurrent& p) {
  if (is_identity(p, kGeneratorTol)) return;
  const PCurrent q = simplify(p);
  for (auto& [c, r] : terms_)
    if (approx_equal(r, q, kGeneratorTol)) {
      c += coeff;
      prune();
      return;
    }
  terms_.emplace_back(coeff, q);
  prune();
}

void CurrentCocycleCombination::add(const CurrentCocycleCombination& other, cplx scale) {
  for (const auto& [c, p] : other.terms_) add(scale * c, p);
}

void CurrentCocycleCombination::prune() {
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(), [](const Term& t) { return std::abs(t.first) <= 1e-12; }),
               terms_.end());
}

CurrentCocycleCombination operator+(const CurrentCocycleCombination& a, const CurrentCocycleCombination& b) {
  CurrentCocycleCombination out = a;
  out.add(b);
  return out;
}

CurrentCocycleCombination operator-(const CurrentCocycleCombination& a, const CurrentCocycleCombination& b) {
  CurrentCocycleCombination out = a;
  out.add(b, -1.0);
  return out;
}

bool equivalent(const CurrentCocycleCombination& a, const CurrentCocycleCombination& b, double coeff_tol) {
  const auto d = a - b;
  return std::all_of(d.terms().begin(), d.terms().end(),
                     [&](const auto& t) { return std::abs(t.first) <= coeff_tol; });
}

CurrentCocycleCombination act_current_iwasawa(const PCurrent& g, const CurrentCocycleCombination& v) {
  CurrentCocycleCombination out;
  cplx total = 0.0;
  for (const auto& [c, p] : v.terms()) {
    out.add(c, current_mul(g, p));
    total += c;
  }
  out.add(-total, g);
  return out;
}

CurrentCocycleCombination act_current_compact(const GCurrent& k, const CurrentCocycleCombination& v) {
  CurrentCocycleCombination out;
  for (const auto& [c, p] : v.terms())
    out.add(c, combine_pointwise<GroupElement, IwasawaElement, IwasawaElement>(
                   CurrentVariant::iwasawa, k, p,
                   [](const GroupElement& a, const IwasawaElement& b) { return k_conjugate(a, b).p; }));
  return out;
}

std::pair<PCurrent, GCurrent> current_decompose(const GCurrent& g) {
  std::vector<IwasawaElement> ps;
  std::vector<GroupElement> ks;
  for (const auto& v : g.values()) {
    auto d = iwasawa_decompose(v);
    ps.push_back(std::move(d.p));
    ks.push_back(std::move(d.k));
  }
  return {PCurrent(CurrentVariant::iwasawa, g.breaks(), std::move(ps)),
          GCurrent(CurrentVariant::compact, g.breaks(), std::move(ks))};
}

CurrentCocycleCombination act_current_group(const GCurrent& g, const CurrentCocycleCombination& v) {
  const auto [p, k] = current_decompose(g);
  return act_current_iwasawa(p, act_current_compact(k, v));
}

} // namespace upq
