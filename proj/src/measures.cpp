#include "upq/measures.hpp"

#include <cmath>
#include <numbers>

namespace upq {

void validate(const RadialWindow& w) {
  if (!(w.min > 0.0) || !(w.max > w.min) || !std::isfinite(w.max))
    throw InvalidInput("radial window needs 0 < min < max < inf");
}

RVector s_coordinates(const CMatrix& x) {
  const auto p = x.rows();
  RVector v(p * p);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < p; ++i) {
    v(k++) = x(i, i).real();
    for (Eigen::Index j = 0; j < i; ++j) {
      v(k++) = x(i, j).real();
      v(k++) = x(i, j).imag();
    }
  }
  return v;
}

CMatrix s_from_coordinates(const RVector& v, int p) {
  if (v.size() != static_cast<Eigen::Index>(p) * p)
    throw DimensionMismatch("expected " + std::to_string(p * p) + " coordinates");
  CMatrix x = CMatrix::Zero(p, p);
  Eigen::Index k = 0;
  for (int i = 0; i < p; ++i) {
    x(i, i) = v(k++);
    for (int j = 0; j < i; ++j) {
      x(i, j) = cplx(v(k), v(k + 1));
      k += 2;
    }
  }
  return x;
}

double right_translation_jacobian(const TriangularS& s0) {
  const int p = s0.sig().p;
  const CMatrix& m = s0.matrix();
  return std::abs(real_linear_det(p * p, [&](const RVector& v) {
    return s_coordinates(s_from_coordinates(v, p) * m);
  }));
}

double right_translation_jacobian_formula(const TriangularS& s0) {
  const int p = s0.sig().p;
  double j = 1.0;
  for (int i = 0; i < p; ++i) j *= std::pow(s0.matrix()(i, i).real(), 2 * (p - i) - 1);
  return j;
}

double positive_sphere_area(int p) {
  const double d = static_cast<double>(p) * p;
  const double full = 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
  return full / std::pow(2.0, p);
}

std::string to_string(MeasureKind kind) {
  switch (kind) {
  case MeasureKind::power_law: return "power_law";
  case MeasureKind::right_haar: return "right_haar";
  case MeasureKind::custom: return "custom";
  }
  return "unknown";
}

WeightFunction gaussian_weight() {
  return [](const TriangularS& s) { return std::exp(-0.5 * s.norm_squared()); };
}

MeasureOnS::MeasureOnS(MeasureKind kind, Signature sig, Density density, Sampler sampler, WindowMass mass)
    : kind_(kind), sig_(sig), density_(std::move(density)), sampler_(std::move(sampler)),
      mass_(std::move(mass)) {}

double MeasureOnS::window_mass(const RadialWindow& w) const {
  if (!mass_) throw InvalidInput("measure " + to_string(kind_) + " has no exact window mass");
  validate(w);
  return mass_(w);
}

namespace {

/// Uniform direction on the unit sphere in R^{p²}, diagonal coordinates made positive.
CMatrix random_direction(int p, Rng& rng) {
  RVector v(p * p);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = std_normal(rng);
  v /= v.norm();
  CMatrix m = s_from_coordinates(v, p);
  for (int i = 0; i < p; ++i) m(i, i) = std::abs(m(i, i).real());
  return m;
}

double log_normal_pdf(double r, double sigma) {
  const double l = std::log(r);
  return std::exp(-l * l / (2.0 * sigma * sigma)) / (r * sigma * std::sqrt(2.0 * std::numbers::pi));
}

MeasureOnS::Sampler proposal_sampler(const Signature& sig, MeasureOnS::Density density,
                                     const ProposalConfig& cfg) {
  return [sig, density = std::move(density), cfg](Rng& rng, const RadialWindow& w) {
    const int p = sig.p;
    CMatrix m = CMatrix::Zero(p, p);
    double q = 1.0;
    const double tau = cfg.offdiag_scale / std::sqrt(2.0);
    for (int i = 0; i < p; ++i) {
      const double r = std::exp(cfg.log_sigma * std_normal(rng));
      m(i, i) = r;
      q *= log_normal_pdf(r, cfg.log_sigma);
      for (int j = 0; j < i; ++j) {
        const cplx z(tau * std_normal(rng), tau * std_normal(rng));
        m(i, j) = z;
        q *= std::exp(-std::norm(z) / (2.0 * tau * tau)) / (2.0 * std::numbers::pi * tau * tau);
      }
    }
    TriangularS s(sig, std::move(m));
    const double weight = w.contains(std::sqrt(s.norm_squared())) ? density(s) / q : 0.0;
    return WeightedPoint{std::move(s), weight};
  };
}

} // namespace

MeasureOnS power_law_measure(const Signature& sig) {
  const int p = sig.p;
  const double omega = positive_sphere_area(p);
  auto density = [p](const TriangularS& s) { return std::pow(s.norm_squared(), -0.5 * p * p); };
  auto mass = [omega](const RadialWindow& w) { return omega * std::log(w.max / w.min); };
  auto sampler = [sig, mass](Rng& rng, const RadialWindow& w) {
    validate(w);
    const double r = w.min * std::exp(uniform01(rng) * std::log(w.max / w.min));
    CMatrix m = random_direction(sig.p, rng) * cplx(r);
    return WeightedPoint{TriangularS(sig, std::move(m)), mass(w)};
  };
  return MeasureOnS(MeasureKind::power_law, sig, density, sampler, mass);
}

std::vector<int> right_haar_exponents(int p) {
  std::vector<int> c;
  for (int i = 1; i <= p; ++i) c.push_back(2 * p - 2 * i + 1);
  return c;
}

RVector fit_right_haar_exponents(const Signature& sig, Rng& rng, int n_translations) {
  // Right invariance of ∏ r_ii^{−c_i} under s ↦ s·s₀ reads Σ c_i log s₀_ii = log J(s₀),
  // because the diagonal of s·s₀ is the entrywise product of the diagonals.
  const int p = sig.p;
  RMatrix a(n_translations, p);
  RVector b(n_translations);
  for (int t = 0; t < n_translations; ++t) {
    const auto s0 = random_triangular(sig, rng, {0.5, 0.5, 0.0, 0.0});
    for (int i = 0; i < p; ++i) a(t, i) = std::log(s0.matrix()(i, i).real());
    b(t) = std::log(right_translation_jacobian(s0));
  }
  return a.colPivHouseholderQr().solve(b);
}

MeasureOnS right_haar_measure(const Signature& sig, const ProposalConfig& proposal) {
  const auto c = right_haar_exponents(sig.p);
  MeasureOnS::Density density = [c](const TriangularS& s) {
    double d = 1.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      d *= std::pow(s.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real(), -c[i]);
    return d;
  };
  return MeasureOnS(MeasureKind::right_haar, sig, density, proposal_sampler(sig, density, proposal));
}

MeasureOnS custom_measure(const Signature& sig, MeasureOnS::Density density, const ProposalConfig& proposal) {
  auto sampler = proposal_sampler(sig, density, proposal);
  return MeasureOnS(MeasureKind::custom, sig, std::move(density), std::move(sampler));
}

double radon_nikodym(const MeasureOnS& nu, const TriangularS& s, const TriangularS& s0) {
  return nu.density(s * s0) * right_translation_jacobian(s0) / nu.density(s);
}

WeightFunction haar_reweight(const MeasureOnS& nu) {
  if (nu.kind() == MeasureKind::right_haar) return [](const TriangularS&) { return 1.0; };
  const auto mu = right_haar_measure(nu.sig());
  return [mu, nu](const TriangularS& s) { return std::sqrt(mu.density(s) / nu.density(s)); };
}

MCEstimate integrate(const MeasureOnS& nu, const std::function<double(const TriangularS&)>& g,
                     const RadialWindow& window, long n_samples, std::uint64_t seed) {
  validate(window);
  Rng rng = make_stream(seed, 0);
  std::vector<double> vals(static_cast<std::size_t>(n_samples));
  for (auto& v : vals) {
    const auto pt = nu.sample(rng, window);
    v = pt.weight == 0.0 ? 0.0 : pt.weight * g(pt.s);
  }
  auto e = mean_estimate(vals);
  e.seed = seed;
  return e;
}

} // namespace upq
