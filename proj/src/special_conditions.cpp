#include "upq/special_conditions.hpp"

#include <cmath>
#include <functional>

namespace upq {

namespace {

struct WeightedSamples {
  std::vector<double> radius;
  std::vector<TriangularS> s;
  std::vector<double> weight;
};

WeightedSamples draw(const MeasureOnS& nu, const RadialWindow& w, long n, Rng& rng) {
  WeightedSamples out;
  out.radius.reserve(static_cast<std::size_t>(n));
  out.s.reserve(static_cast<std::size_t>(n));
  out.weight.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    auto pt = nu.sample(rng, w);
    out.radius.push_back(std::sqrt(pt.s.norm_squared()));
    out.weight.push_back(pt.weight);
    out.s.push_back(std::move(pt.s));
  }
  return out;
}

/// Least-squares slope of y against x.
double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double range_mean(const std::vector<double>& v, long lo, long hi) {
  double s = 0.0;
  for (long i = lo; i < hi; ++i) s += v[static_cast<std::size_t>(i)];
  return s / static_cast<double>(hi - lo);
}

WindowStability stability(const std::string& name, const WeightedSamples& smp, const RadialWindow& w,
                          const std::function<double(const TriangularS&)>& integrand, std::uint64_t seed,
                          int batches) {
  const long n = static_cast<long>(smp.s.size());
  std::vector<double> inner(static_cast<std::size_t>(n)), outer(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double g = smp.weight[k] == 0.0 ? 0.0 : smp.weight[k] * integrand(smp.s[k]);
    outer[k] = g;
    inner[k] = smp.radius[k] <= w.max ? g : 0.0;
  }
  const auto ei = mean_estimate(inner), eo = mean_estimate(outer);
  std::vector<double> tail(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) tail[static_cast<std::size_t>(i)] = outer[static_cast<std::size_t>(i)] - inner[static_cast<std::size_t>(i)];
  const auto et = mean_estimate(tail);

  WindowStability out;
  out.at_r = {name, w, ei.value, ei.std_error, n, seed};
  out.at_2r = {name, {w.min, 2.0 * w.max}, eo.value, eo.std_error, n, seed};
  if (!std::isfinite(ei.value) || !std::isfinite(eo.value))
    throw NonFinite(name + " estimate is not finite");
  if (et.value > 5.0 * et.std_error && et.value > 1e-3 * std::max(1e-12, std::abs(ei.value)))
    throw NonFinite(name + " keeps growing with the window: +" + std::to_string(et.value) + " from R to 2R");
  if (ei.value != 0.0) {
    out.ratio = eo.value / ei.value;
    out.ratio_std_error = batch_std_error(n, batches, [&](long lo, long hi) {
      const double a = range_mean(inner, lo, hi);
      return a == 0.0 ? 1.0 : range_mean(outer, lo, hi) / a;
    });
  }
  out.stable = std::abs(out.ratio - 1.0) <= 3.0 * out.ratio_std_error + 1e-12;
  return out;
}

} // namespace

SpecialConditionsReport special_conditions(const MeasureOnS& nu, const WeightFunction& f,
                                           const SignVector& eps, const std::vector<IwasawaElement>& tests,
                                           const RadialWindow& window, const SpecialConditionsConfig& cfg) {
  validate(window);
  if (cfg.growth_levels < 2) throw InvalidInput("growth fit needs at least two levels");
  SpecialConditionsReport rep;

  // (i): nested windows [δ_k, R] evaluated on one sample set from the widest.
  std::vector<double> deltas;
  for (int k = 0; k < cfg.growth_levels; ++k) deltas.push_back(window.min / std::pow(cfg.growth_factor, k));
  const RadialWindow widest{deltas.back(), window.max};
  Rng rng = make_stream(cfg.seed, 1);
  const auto smp = draw(nu, widest, cfg.n_samples, rng);
  const long n = cfg.n_samples;
  std::vector<std::vector<double>> level_vals(deltas.size(), std::vector<double>(static_cast<std::size_t>(n)));
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double fv = f(smp.s[k]);
    const double g = smp.weight[k] == 0.0 ? 0.0 : smp.weight[k] * fv * fv;
    for (std::size_t l = 0; l < deltas.size(); ++l) level_vals[l][k] = smp.radius[k] >= deltas[l] ? g : 0.0;
  }
  std::vector<double> logs, means;
  for (std::size_t l = 0; l < deltas.size(); ++l) {
    const auto e = mean_estimate(level_vals[l]);
    rep.growth.levels.push_back({"i", {deltas[l], window.max}, e.value, e.std_error, n, cfg.seed});
    logs.push_back(std::log(1.0 / deltas[l]));
    means.push_back(e.value);
  }
  rep.growth.slope = slope_of(logs, means);
  rep.growth.slope_std_error = batch_std_error(n, cfg.batches, [&](long lo, long hi) {
    std::vector<double> m;
    for (const auto& v : level_vals) m.push_back(range_mean(v, lo, hi));
    return slope_of(logs, m);
  });

  // (ii) and (iii) on [δ, 2R].
  const RadialWindow doubled{window.min, 2.0 * window.max};
  for (std::size_t t = 0; t < tests.size(); ++t) {
    const auto& elem = tests[t];
    Rng r2 = make_stream(cfg.seed, 100 + t);
    const auto s2 = draw(nu, doubled, cfg.n_samples, r2);
    rep.translation.push_back(stability(
        "ii", s2, window,
        [&](const TriangularS& s) {
          const double d = f(s * elem.s) - f(s);
          return d * d;
        },
        cfg.seed, cfg.batches));
    rep.spherical.push_back(stability(
        "iii", s2, window,
        [&](const TriangularS& s) {
          const double fv = f(s);
          return (1.0 - spherical_function(eps, s, elem.h).real()) * fv * fv;
        },
        cfg.seed, cfg.batches));
  }
  return rep;
}

double translation_integral_p1(double s0) {
  return 0.5 * std::log(std::pow(1.0 + s0 * s0, 2) / (4.0 * s0 * s0));
}

double spherical_integral_p1(double theta, double z_norm_sq) {
  return 0.5 * std::log(std::abs(cplx(1.0 + 0.5 * z_norm_sq, -theta)));
}

double growth_integral_p1(double delta, double r_max) {
  // E1(x) = −Ei(−x).
  auto e1 = [](double x) { return -std::expint(-x); };
  return 0.5 * (e1(delta * delta) - e1(r_max * r_max));
}

} // namespace upq
