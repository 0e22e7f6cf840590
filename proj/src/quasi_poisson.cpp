#include "upq/quasi_poisson.hpp"

#include <cmath>

#include "upq/quadrature.hpp"

namespace upq {

QPTriple make_qp_triple(MeasureOnS nu, YFunction u, RadialWindow window, double intensity) {
  validate(window);
  if (!nu.exact_window_sampler())
    throw InvalidInput("quasi-Poisson sampling needs a measure with an exact window sampler");
  if (!(intensity >= 0.0)) throw InvalidInput("intensity must be nonnegative");
  return {std::move(nu), std::move(u), window, intensity};
}

double window_intensity(const QPTriple& t) { return t.intensity * t.nu.window_mass(t.window); }

namespace {

/// Fixed unit directions (positive diagonal) for the angular average.
std::vector<CMatrix> directions(int p, const MuQuadrature& q) {
  if (p == 1) return {CMatrix::Ones(1, 1)};
  Rng rng = make_stream(q.direction_seed, 0);
  std::vector<CMatrix> out;
  for (int i = 0; i < q.directions; ++i) {
    RVector v(p * p);
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = std_normal(rng);
    v /= v.norm();
    CMatrix m = s_from_coordinates(v, p);
    for (int d = 0; d < p; ++d) m(d, d) = std::abs(m(d, d).real());
    out.push_back(std::move(m));
  }
  return out;
}

} // namespace

double integrate_mu(const QPTriple& t, const YFunction& g, const MuQuadrature& q) {
  const Signature& sig = t.nu.sig();
  if (t.intensity == 0.0) return 0.0;
  const auto dirs = directions(sig.p, q);
  const double omega = positive_sphere_area(sig.p);
  std::vector<double> log_breaks;
  for (double r : q.r_breaks)
    if (r > 0) log_breaks.push_back(std::log(r));
  // dν = |s|^{−p²} ds = dΩ · dr/r on the window.
  auto radial = [&](double x) {
    return composite_legendre(
        [&](double l) {
          const double r = std::exp(l);
          double acc = 0.0;
          for (const auto& d : dirs) acc += g(TriangularS(sig, d * cplx(r)), x);
          return acc / static_cast<double>(dirs.size());
        },
        std::log(t.window.min), std::log(t.window.max), log_breaks, q.max_log_width, q.nodes);
  };
  const double inner = composite_legendre(radial, 0.0, 1.0, q.x_breaks, 1.0, std::max(4, q.nodes / 2));
  return t.intensity * omega * inner;
}

double log_renormalization(const QPTriple& t, const MuQuadrature& q) {
  return integrate_mu(t, [&](const TriangularS& s, double x) { return 1.0 - std::exp(-t.u(s, x)); }, q);
}

ConfigurationSampler::ConfigurationSampler(QPTriple t, const MuQuadrature& q, double cap)
    : t_(std::move(t)), mass_(window_intensity(t_)), c_r_(0.0) {
  if (mass_ > cap)
    throw WindowTooLarge("expected " + std::to_string(mass_) + " points exceeds cap " + std::to_string(cap));
  c_r_ = log_renormalization(t_, q);
}

Configuration ConfigurationSampler::sample(Rng& rng) const {
  Configuration c;
  c.log_weight = c_r_;
  if (mass_ == 0.0) return c;
  std::poisson_distribution<long> count(mass_);
  const long n = count(rng);
  c.points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    auto pt = t_.nu.sample(rng, t_.window);
    c.points.push_back({std::move(pt.s), uniform01(rng)});
  }
  c.outside.assign(c.points.size(), false);
  return c;
}

Configuration sample_configuration(const QPTriple& t, Rng& rng) { return ConfigurationSampler(t).sample(rng); }

CFCheck characteristic_functional_check(const QPTriple& t, const YFunction& f, long n_samples,
                                        std::uint64_t seed, const MuQuadrature& q) {
  const ConfigurationSampler sampler(t, q);
  Rng rng = make_stream(seed, 21);
  std::vector<double> vals(static_cast<std::size_t>(n_samples));
  for (auto& v : vals) {
    const auto c = sampler.sample(rng);
    double sum = 0.0;
    for (const auto& y : c.points) sum += f(y.s, y.x);
    v = std::exp(-sum);
  }
  const auto e = mean_estimate(vals);
  const double scale = std::exp(sampler.log_weight());
  CFCheck out;
  double acc = 0.0;
  for (long i = 0; i < n_samples; ++i) {
    acc += vals[static_cast<std::size_t>(i)];
    const long n = i + 1;
    if ((n & (n - 1)) == 0 || n == n_samples) out.running.emplace_back(n, scale * acc / static_cast<double>(n));
  }
  out.mc = scale * e.value;
  out.std_error = scale * e.std_error;
  out.closed = std::exp(integrate_mu(t, [&](const TriangularS& s, double x) {
    return std::exp(-f(s, x)) - std::exp(-t.u(s, x));
  }, q));
  out.n_samples = n_samples;
  out.seed = seed;
  out.agrees = within_sigma(out.mc, out.closed, out.std_error, 0.0, 3.0, 1e-10 * std::abs(out.closed));
  return out;
}

Configuration translate_configuration(const Configuration& w, const StepCurrent<TriangularS>& shift,
                                      const RadialWindow& window) {
  Configuration out;
  out.log_weight = w.log_weight;
  out.points.reserve(w.points.size());
  for (const auto& y : w.points) {
    TriangularS moved = y.s * shift.at(y.x);
    out.outside.push_back(!window.contains(std::sqrt(moved.norm_squared())));
    out.points.push_back({std::move(moved), y.x});
  }
  return out;
}

namespace {

/// mean(a)/mean(b) with the delta-method error for correlated samples.
RatioEntry ratio_of_means(std::string name, const std::vector<double>& a, const std::vector<double>& b) {
  const auto ea = mean_estimate(a), eb = mean_estimate(b);
  const double r = ea.value / eb.value;
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - ea.value) * (b[i] - eb.value);
  const double n = static_cast<double>(a.size());
  cov /= std::max(1.0, n - 1.0) * n;
  const double var =
      (ea.std_error * ea.std_error - 2.0 * r * cov + r * r * eb.std_error * eb.std_error) / (eb.value * eb.value);
  return {std::move(name), r, std::sqrt(std::max(0.0, var))};
}

double sum_over(const Configuration& c, const YFunction& f) {
  double acc = 0.0;
  for (const auto& y : c.points) acc += f(y.s, y.x);
  return acc;
}

} // namespace

QuasiInvarianceReport quasi_invariance_estimate(const QPTriple& t, const StepCurrent<TriangularS>& shift,
                                                const std::vector<NamedTest>& tests, long n_samples,
                                                std::uint64_t seed) {
  const ConfigurationSampler sampler(t);
  const auto inverse = current_inv(shift);
  Rng rng = make_stream(seed, 31);
  const std::size_t m = tests.size();
  std::vector<std::vector<double>> num(m), den(m);
  std::vector<double> mass_num, mass_den;
  for (long i = 0; i < n_samples; ++i) {
    const auto c = sampler.sample(rng);
    const auto back = translate_configuration(c, inverse, t.window);
    const auto fwd = translate_configuration(c, shift, t.window);
    for (std::size_t k = 0; k < m; ++k) {
      num[k].push_back(std::exp(-sum_over(back, tests[k].f)));
      den[k].push_back(std::exp(-sum_over(c, tests[k].f)));
    }
    mass_num.push_back(std::exp(-sum_over(c, t.u)));
    mass_den.push_back(std::exp(-sum_over(fwd, t.u)));
  }
  QuasiInvarianceReport out;
  out.n_samples = n_samples;
  out.seed = seed;
  out.sup_ratio = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    out.entries.push_back(ratio_of_means(tests[k].name, num[k], den[k]));
    out.sup_ratio = std::max(out.sup_ratio, out.entries.back().ratio);
  }
  out.mass_ratio = ratio_of_means("mass", mass_num, mass_den);
  return out;
}

double translation_factor(const QPTriple& t, const StepCurrent<TriangularS>& shift, MuQuadrature q) {
  const auto inverse = current_inv(shift);
  q.x_breaks.insert(q.x_breaks.end(), shift.breaks().begin(), shift.breaks().end());
  return std::exp(integrate_mu(t, [&](const TriangularS& s, double x) {
    return std::exp(-t.u(s * inverse.at(std::min(x, std::nextafter(1.0, 0.0))), x)) - std::exp(-t.u(s, x));
  }, q));
}

} // namespace upq
