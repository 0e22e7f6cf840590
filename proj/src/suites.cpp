#include "upq/suites.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "upq/cocycle.hpp"
#include "upq/current_group.hpp"
#include "upq/quasi_poisson.hpp"
#include "upq/serialize.hpp"
#include "upq/special_conditions.hpp"
#include "upq/svg_plot.hpp"

namespace upq {

// --- configuration -----------------------------------------------------------

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigInvalid(m); };
  if (c.p < 1 || c.q < c.p || c.q > 3) fail("need 1 <= p <= q <= 3");
  if (c.degree < 4) fail("degree must be at least 4");
  if (c.samples <= 0) fail("samples must be positive");
  if (!(c.window_min > 0.0 && c.window_max > c.window_min && std::isfinite(c.window_max)))
    fail("window needs 0 < min < max");
  if (!c.eps.empty()) {
    try {
      if (parse_sign_vector(c.eps).size() != c.p) fail("eps needs p entries");
    } catch (const InvalidInput& e) {
      fail(e.what());
    }
  }
  const auto& names = suite_names();
  if (c.suite != "all" && std::find(names.begin(), names.end(), c.suite) == names.end())
    fail("unknown suite '" + c.suite + "'");
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string::npos) throw ConfigInvalid("line " + std::to_string(lineno) + ": expected key = value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  std::replace(key.begin(), key.end(), '_', '-');
  try {
    std::size_t used = 0;
    auto whole = [&](std::size_t n) {
      if (n != value.size()) throw std::invalid_argument("trailing characters");
    };
    if (key == "suite") cfg.suite = value;
    else if (key == "eps") cfg.eps = value;
    else if (key == "out-dir") cfg.out_dir = value;
    else if (key == "p") cfg.p = std::stoi(value, &used), whole(used);
    else if (key == "q") cfg.q = std::stoi(value, &used), whole(used);
    else if (key == "degree") cfg.degree = std::stoi(value, &used), whole(used);
    else if (key == "seed") cfg.seed = std::stoull(value, &used), whole(used);
    else if (key == "samples") cfg.samples = std::stol(value, &used), whole(used);
    else if (key == "window-min") cfg.window_min = std::stod(value, &used), whole(used);
    else if (key == "window-max") cfg.window_max = std::stod(value, &used), whole(used);
    else throw ConfigInvalid("unknown key '" + raw_key + "'");
  } catch (const std::logic_error&) {
    throw ConfigInvalid("bad value '" + value + "' for '" + raw_key + "'");
  }
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot read config file '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  for (const auto& [k, v] : parse_key_values(text.str())) apply_setting(base, k, v);
  return base;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"group",     "iwasawa", "bargmann", "special",
                                              "extension", "qp",      "currents"};
  return names;
}

// --- shared helpers ------------------------------------------------------------

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Rows {
  std::string suite;
  std::uint64_t seed;
  Report report;

  void add(std::string check, std::string anchor, double estimate, double reference, double std_error,
           double tolerance, bool pass) {
    report.rows.push_back({suite, std::move(check), std::move(anchor), estimate, reference, std_error, tolerance,
                           pass && std::isfinite(estimate), seed});
  }
  /// |estimate − reference| ≤ tolerance.
  void near(std::string check, std::string anchor, double estimate, double reference, double tolerance) {
    add(std::move(check), std::move(anchor), estimate, reference, kNaN, tolerance,
        std::abs(estimate - reference) <= tolerance);
  }
  /// Agreement within k standard errors (plus an absolute floor for rounding).
  void sigma(std::string check, std::string anchor, double estimate, double reference, double se, double k = 3.0,
             double floor = 1e-12) {
    const double tol = k * se + floor;
    add(std::move(check), std::move(anchor), estimate, reference, se, tol, std::abs(estimate - reference) <= tol);
  }
  /// estimate ≤ tolerance.
  void bound(std::string check, std::string anchor, double estimate, double tolerance) {
    add(std::move(check), std::move(anchor), estimate, kNaN, kNaN, tolerance, estimate <= tolerance);
  }
};

std::string sig_tag(const Signature& sig) { return "(" + std::to_string(sig.p) + "," + std::to_string(sig.q) + ")"; }

std::vector<Signature> small_signatures() {
  std::vector<Signature> out;
  for (int q = 1; q <= 3; ++q)
    for (int p = 1; p <= q; ++p) out.push_back({p, q});
  return out;
}

GroupElement random_group(const Signature& sig, Rng& rng) {
  return embed(random_iwasawa(sig, rng)) * random_compact(sig, rng);
}

SignVector eps_of(const RunConfig& cfg) {
  return cfg.eps.empty() ? SignVector::all_plus(cfg.p) : parse_sign_vector(cfg.eps);
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool bit_equal(const IwasawaElement& a, const IwasawaElement& b) {
  return a.s.matrix() == b.s.matrix() && a.h.n() == b.h.n() && a.h.z() == b.h.z();
}

/// Same terms in the same order with bit-identical coefficients and values.
bool bit_equal(const CurrentCocycleCombination& a, const CocycleCombination& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& [ca, pa] = a.terms()[i];
    const auto& [cb, pb] = b.terms()[i];
    if (ca != cb || pa.pieces() != 1 || !bit_equal(pa.values().front(), pb)) return false;
  }
  return true;
}

double max_coeff(const CocycleCombination& v) {
  double m = 0.0;
  for (const auto& t : v.terms()) m = std::max(m, std::abs(t.first));
  return m;
}

double max_coeff(const CurrentCocycleCombination& v) {
  double m = 0.0;
  for (const auto& t : v.terms()) m = std::max(m, std::abs(t.first));
  return m;
}

CocycleCombination random_combination(const Signature& sig, Rng& rng, int terms) {
  CocycleCombination v;
  for (int i = 0; i < terms; ++i) {
    const cplx c = complex_normal(rng);
    v.add(c, random_iwasawa(sig, rng));
  }
  return v;
}

/// Random step current with `pieces` pieces (random interior breaks).
template <typename T, typename Make>
StepCurrent<T> random_current(CurrentVariant variant, int pieces, Rng& rng, Make make) {
  std::vector<double> cuts;
  for (int i = 1; i < pieces; ++i) cuts.push_back(std::round(uniform01(rng) * 1000.0) / 1000.0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> breaks{0.0};
  for (double c : cuts)
    if (c > breaks.back() && c < 1.0) breaks.push_back(c);
  breaks.push_back(1.0);
  std::vector<T> vals;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) vals.push_back(make());
  return StepCurrent<T>(variant, breaks, vals);
}

// --- group -----------------------------------------------------------------------

Report group_suite(const RunConfig& cfg) {
  Rows r{"group", cfg.seed, {}};
  for (const auto& sig : small_signatures()) {
    const int p = sig.p, q = sig.q;
    const std::pair<LiePattern, int> expected[] = {{LiePattern::full, (p + q) * (p + q)},
                                                   {LiePattern::heisenberg, p * (2 * q - p)},
                                                   {LiePattern::iwasawa, 2 * p * q},
                                                   {LiePattern::compact, p * p + q * q}};
    const char* anchors[] = {"dim U(p,q) = (p+q)^2", "dim N = p(2q-p)", "dim P = 2pq", "dim K = p^2+q^2"};
    for (int i = 0; i < 4; ++i) {
      const int d = lie_algebra_dimension(sig, expected[i].first);
      r.near("dimension." + to_string(expected[i].first) + sig_tag(sig), anchors[i], d, expected[i].second, 0.0);
    }
  }
  Rng rng = make_stream(cfg.seed, 101);
  for (const auto& sig : small_signatures()) {
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const auto a = random_group(sig, rng), b = random_group(sig, rng);
      worst = std::max({worst, is_member((a * b).matrix(), sig).residual, is_member(a.inverse().matrix(), sig).residual});
    }
    r.bound("closure" + sig_tag(sig), "g1 g2 and g^-1 satisfy g sigma g* = sigma", worst, 1e-8);
  }
  for (const auto& sig : small_signatures()) {
    double assoc = 0.0, central = 0.0, scale = 1.0;
    for (int t = 0; t < 1000; ++t) {
      const auto a = random_heisenberg(sig, rng), b = random_heisenberg(sig, rng), c = random_heisenberg(sig, rng);
      const auto l = heis_mul(heis_mul(a, b), c), rr = heis_mul(a, heis_mul(b, c));
      assoc = std::max({assoc, max_abs(l.n() - rr.n()), max_abs(l.z() - rr.z())});
      const auto comm = heis_mul(heis_mul(a, b), heis_mul(a.inverse(), b.inverse()));
      const CMatrix omega = a.z() * b.z().adjoint() - b.z() * a.z().adjoint();
      central = std::max({central, max_abs(comm.z()), max_abs(comm.n() + omega)});
      scale = std::max({scale, max_abs(l.n()), max_abs(omega)});
    }
    r.bound("heisenberg.associativity" + sig_tag(sig), "(ab)c = a(bc) in N", assoc, 1e-13 * scale);
    r.bound("heisenberg.commutator" + sig_tag(sig), "aba^-1b^-1 = (-(z1z2*-z2z1*), 0) is central", central,
            1e-13 * scale);
  }
  return r.report;
}

// --- iwasawa -------------------------------------------------------------------------

Report iwasawa_suite(const RunConfig& cfg) {
  Rows r{"iwasawa", cfg.seed, {}};
  Rng rng = make_stream(cfg.seed, 201);
  for (const auto& sig : small_signatures()) {
    double round = 0.0, unique = 0.0, repeat = 0.0, inv = 0.0;
    for (int t = 0; t < 500; ++t) {
      const auto p = random_iwasawa(sig, rng);
      const auto k = random_compact(sig, rng);
      const auto g = embed(p) * k;
      const auto d = iwasawa_decompose(g);
      round = std::max({round, coordinate_distance(d.p, p), max_abs(d.k.matrix() - k.matrix())});
      const auto d2 = iwasawa_decompose(g);
      repeat = std::max({repeat, coordinate_distance(d2.p, d.p), max_abs(d2.k.matrix() - d.k.matrix())});
      // g·k2 has the same P factor.
      unique = std::max(unique, coordinate_distance(iwasawa_decompose(g * random_compact(sig, rng)).p, p));
      const auto w = involution_w(sig);
      const auto c = k_conjugate(w, p);
      const CMatrix pp = embed(p).matrix(), qq = embed(c.p).matrix();
      inv = std::max(inv, max_abs(w.matrix() * pp * pp.adjoint() * w.matrix() - qq * qq.adjoint()) /
                              std::max(1.0, max_abs(pp * pp.adjoint())));
    }
    r.bound("round_trip" + sig_tag(sig), "decompose(embed(p) k) = (p, k)", round, 1e-8);
    r.bound("repeat" + sig_tag(sig), "decomposition is a function of g", repeat, 0.0);
    r.bound("uniqueness" + sig_tag(sig), "P factor of g k2 equals that of g for k2 in K", unique, 1e-8);
    r.bound("involution" + sig_tag(sig), "w p = p' k' implies w pp* w = p'p'*", inv, 1e-10);
  }
  return r.report;
}

// --- bargmann ------------------------------------------------------------------------

Report bargmann_suite(const RunConfig& cfg) {
  Rows r{"bargmann", cfg.seed, {}};
  const Signature sig{1, 2};
  const SignVector eps = SignVector::all_plus(1);
  Rng rng = make_stream(cfg.seed, 301);

  const auto basis12 = MultiIndexBasis::make(sig, 12);
  double coeff_err = 0.0, quad_err = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto s = random_triangular(sig, rng);
    CMatrix n = random_skew_hermitian(1, rng, 1.0), z = complex_gaussian_matrix(rng, 1, 1);
    n *= 0.3 * uniform01(rng) / std::max(1e-12, n.norm());
    z *= 0.3 * uniform01(rng) / std::max(1e-12, z.norm());
    const HeisenbergElement h(sig, n, z);
    const cplx chi = std::exp((s.matrix() * (n - 0.5 * z * z.adjoint()) * s.matrix().adjoint()).trace());
    const auto T = rep_operator(eps, s, h, basis12);
    coeff_err = std::max(coeff_err, std::abs(T.m(0, 0) - chi));
    const auto q = vacuum_functional_check(T.apply(BargmannVector::vacuum(basis12)), 8);
    quad_err = std::max(quad_err, std::abs(q.quadrature - chi));
  }
  r.bound("spherical.coefficient(1,2),D=12", "<T 1, 1> = chi(n - zz*/2)", coeff_err, 1e-6);
  r.bound("spherical.gaussian_mean(1,2),D=12", "integral of T 1 against the Gaussian = chi(n - zz*/2)", quad_err, 1e-6);

  auto ccr = [&](const Signature& sg, const SignVector& e, int D) {
    const auto basis = MultiIndexBasis::make(sg, D);
    const int inner = basis->block_size(D - 1);
    double worst = 0.0;
    for (int i = 0; i < sg.p; ++i)
      for (int j = 0; j < sg.mid(); ++j) {
        const auto [up, down] = creation_annihilation(e, i, j, basis);
        const CMatrix c = down.m * up.m - up.m * down.m;
        worst = std::max(worst, max_abs(c.topLeftCorner(inner, inner) - CMatrix::Identity(inner, inner)));
      }
    return worst;
  };
  r.bound("ccr(1,2),D=12", "[A-, A+] = I below the top degree", ccr(sig, eps, 12), 1e-12);
  const Signature cs{cfg.p, cfg.q};
  if (cs.mid() > 0)
    r.bound("ccr" + sig_tag(cs) + ",eps=" + to_string(eps_of(cfg)), "[A-, A+] = I below the top degree",
            ccr(cs, eps_of(cfg), std::min(cfg.degree, 8)), 1e-12);

  // Group law: max over triples, for growing D.
  Rng glr = make_stream(cfg.seed, 302);
  std::vector<std::tuple<IwasawaElement, IwasawaElement, TriangularS>> triples;
  for (int t = 0; t < 20; ++t) {
    auto g1 = random_iwasawa(sig, glr);
    auto g2 = random_iwasawa(sig, glr);
    triples.emplace_back(std::move(g1), std::move(g2), random_triangular(sig, glr));
  }
  std::vector<double> residuals;
  Plot plot{"group_law.svg", "Group-law residual under truncation", "degree D", "max residual", false, true, {}};
  PlotSeries series{"(1,2)", {}, {}, {}, true};
  for (int D : {6, 8, 10, 12}) {
    double worst = 0.0;
    for (const auto& [g1, g2, s] : triples) worst = std::max(worst, group_law_residual(g1, g2, s, eps, D));
    residuals.push_back(worst);
    series.x.push_back(D);
    series.y.push_back(worst);
    r.add("group_law(1,2),D=" + std::to_string(D), "T(g1)T(g2) = T(g1 g2) on the vacuum", worst, kNaN, kNaN, kNaN,
          true);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < residuals.size(); ++i) monotone = monotone && residuals[i] < residuals[i - 1];
  r.add("group_law.monotone(1,2)", "truncation residual decreases with D", residuals.back() / residuals.front(), kNaN,
        kNaN, 1.0, monotone);
  plot.series.push_back(series);
  r.report.plots.push_back(plot);

  auto commutant = [&](const Signature& sg, const SignVector& e, int D) {
    const auto basis = MultiIndexBasis::make(sg, D);
    std::vector<BargmannOperator> family;
    for (int k = 0; k < 4; ++k)
      family.push_back(rep_operator(e, random_triangular(sg, rng), random_heisenberg(sg, rng), basis));
    return commutant_scan(family);
  };
  const auto c12 = commutant(sig, eps, 12);
  r.near("commutant(1,2),D=12", "commutant of {T(g)} is the scalars", c12.dimension, 1, 0.0);
  if (cs.mid() > 0) {
    const auto cc = commutant(cs, eps_of(cfg), 8);
    r.near("commutant" + sig_tag(cs) + ",D=8", "commutant of {T(g)} is the scalars", cc.dimension, 1, 0.0);
  }
  return r.report;
}

// --- special conditions -------------------------------------------------------------

Report special_suite(const RunConfig& cfg) {
  Rows r{"special", cfg.seed, {}};
  const Signature sig{1, 2};
  const auto nu = power_law_measure(sig);
  const RadialWindow window{cfg.window_min, cfg.window_max};
  SpecialConditionsConfig sc;
  sc.n_samples = 5 * cfg.samples;
  sc.seed = cfg.seed;
  const struct {
    double s0, theta;
    cplx z;
  } params[] = {{1.5, 0.4, cplx(0.3, 0.2)}, {0.6, -0.8, cplx(-0.5, 0.4)}};
  std::vector<IwasawaElement> tests;
  for (const auto& t : params)
    tests.push_back({TriangularS(sig, CMatrix::Constant(1, 1, t.s0)),
                     HeisenbergElement(sig, CMatrix::Constant(1, 1, cplx(0, t.theta)), CMatrix::Constant(1, 1, t.z))});
  const auto rep = special_conditions(nu, gaussian_weight(), SignVector::all_plus(1), tests, window, sc);

  r.near("growth.slope", "integral of f^2 over delta<|s|<R grows like log(1/delta)", rep.growth.slope, 1.0, 0.05);
  Plot plot{"growth.svg", "Radial integral of f^2 against the window floor", "delta", "integral", true, false, {}};
  PlotSeries mc{"estimate", {}, {}, {}, false}, exact{"closed form", {}, {}, {}, true};
  for (const auto& lvl : rep.growth.levels) {
    const double ref = growth_integral_p1(lvl.window.min, lvl.window.max);
    r.sigma("growth.level(delta=" + std::to_string(lvl.window.min) + ")", "integral = (E1(delta^2) - E1(R^2))/2",
            lvl.estimate, ref, lvl.std_error);
    mc.x.push_back(lvl.window.min);
    mc.y.push_back(lvl.estimate);
    mc.err.push_back(lvl.std_error);
    exact.x.push_back(lvl.window.min);
    exact.y.push_back(ref);
  }
  plot.series = {mc, exact};
  r.report.plots.push_back(plot);

  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto& tr = rep.translation[i];
    const auto& sp = rep.spherical[i];
    const std::string tag = "[" + std::to_string(i) + "]";
    r.sigma("translation.window_ratio" + tag, "integral of |f(s s0) - f(s)|^2 is finite (R vs 2R)", tr.ratio, 1.0,
            tr.ratio_std_error);
    r.sigma("translation.closed_form" + tag, "integral of |f(s s0) - f(s)|^2 = log((1+s0^2)^2/(4 s0^2))/2",
            tr.at_r.estimate, translation_integral_p1(params[i].s0), tr.at_r.std_error);
    r.sigma("spherical.window_ratio" + tag, "integral of (1 - Re phi_s(n,z)) f^2 is finite (R vs 2R)", sp.ratio, 1.0,
            sp.ratio_std_error);
    r.sigma("spherical.closed_form" + tag, "integral of (1 - Re phi_s(n,z)) f^2 = log|1 + |z|^2/2 - i theta|/2",
            sp.at_r.estimate, spherical_integral_p1(params[i].theta, std::norm(params[i].z)), sp.at_r.std_error);
  }
  return r.report;
}

// --- cocycle and extension --------------------------------------------------------------

Report extension_suite(const RunConfig& cfg) {
  Rows r{"extension", cfg.seed, {}};
  const Signature sig{1, 2};
  const SignVector eps = SignVector::all_plus(1);
  const auto nu = power_law_measure(sig);

  Rng rng = make_stream(cfg.seed, 501);
  double worst = 0.0, closed = 0.0;
  const auto basis = MultiIndexBasis::make(sig, cfg.degree);
  for (int t = 0; t < 50; ++t) {
    const auto g1 = random_iwasawa(sig, rng), g2 = random_iwasawa(sig, rng);
    for (int k = 0; k < 100; ++k) {
      const auto s = nu.sample(rng, RadialWindow{cfg.window_min, std::max(2.0 * cfg.window_min, 2.0)}).s;
      worst = std::max(worst, cocycle_identity_residual(g1, g2, s, eps, cfg.degree));
      if (k == 0)
        closed = std::max(closed, (cocycle_fiber(g1, s, eps, basis) - cocycle_closed_form(g1, s, basis)).norm());
    }
  }
  r.bound("cocycle_identity(1,2),D=" + std::to_string(cfg.degree), "b(g1 g2) = T(g1) b(g2) + b(g1)", worst, 1e-6);
  r.bound("closed_form(1,2)", "b(p)(s) = exp(tr(s a s*) - tr(w h)) - f(s)", closed, 1e-10);

  for (const Signature sg : {Signature{1, 2}, Signature{2, 2}}) {
    Rng hr = make_stream(cfg.seed, 502 + static_cast<std::uint64_t>(sg.p));
    double mismatch = 0.0, bk = 0.0;
    for (int t = 0; t < 50; ++t) {
      const auto g1 = random_group(sg, hr), g2 = random_group(sg, hr);
      const auto v = random_combination(sg, hr, 3);
      mismatch = std::max(mismatch, max_coeff(act_group(g1, act_group(g2, v)) - act_group(g1 * g2, v)));
      bk = std::max(bk, static_cast<double>(extended_cocycle(random_compact(sg, hr)).size()));
    }
    r.bound("homomorphism" + sig_tag(sg), "B(g1) after B(g2) equals B(g1 g2) on generators", mismatch, 1e-9);
    r.bound("cocycle_on_K" + sig_tag(sg), "B(k) = 0 for k in K", bk, 0.0);
  }

  GramConfig gc;
  gc.window = {cfg.window_min, cfg.window_max};
  gc.n_samples = cfg.samples;
  gc.seed = cfg.seed;
  gc.max_degree = cfg.degree;
  Rng gr = make_stream(cfg.seed, 503);
  std::vector<IwasawaElement> gens;
  for (int i = 0; i < 5; ++i) gens.push_back(random_iwasawa(sig, gr));
  const auto G = gram_matrix(gens, eps, nu, gc);
  r.add("gram.lambda_min(5 generators)", "b(p_1..p_5) linearly independent: lambda_min > 0", G.lambda_min, kNaN,
        G.lambda_min_std_error, 3.0 * G.lambda_min_std_error, G.lambda_min > 3.0 * G.lambda_min_std_error);
  Plot plot{"gram_spectrum.svg", "Gram spectrum of five cocycle vectors", "index", "eigenvalue", false, true, {}};
  PlotSeries ev{"eigenvalues", {}, {}, {}, true};
  for (std::size_t i = 0; i < G.eigenvalues.size(); ++i) {
    ev.x.push_back(static_cast<double>(i + 1));
    ev.y.push_back(G.eigenvalues[i]);
  }
  plot.series.push_back(ev);
  r.report.plots.push_back(plot);

  auto gd = gc;
  gd.n_samples = std::max(1000L, cfg.samples / 10);
  const auto D = gram_matrix({gens[0], gens[1], gens[0]}, eps, nu, gd);
  r.bound("gram.duplicate", "repeated generator gives a singular Gram matrix", std::abs(D.lambda_min),
          1e-10 * std::max(1.0, D.eigenvalues.back()));

  const double s0 = 1.7;
  const auto pure = IwasawaElement::from_s(TriangularS(sig, CMatrix::Constant(1, 1, s0)));
  const auto P = gram_matrix({pure}, eps, nu, gd);
  r.sigma("gram.pure_S", "|b(s0)|^2 = log((1+s0^2)^2/(4 s0^2))/2", P.gram(0, 0).real(), translation_integral_p1(s0),
          P.std_error(0, 0));
  return r.report;
}

// --- quasi-Poisson ----------------------------------------------------------------------

std::vector<NamedTest> canonical_tests(const YFunction& u) {
  auto radius = [](const TriangularS& s) { return std::sqrt(s.norm_squared()); };
  return {{"zero", [](const TriangularS&, double) { return 0.0; }},
          {"u", u},
          {"indicator", [radius](const TriangularS& s, double x) {
             const double r = radius(s);
             return (r > 0.5 && r < 2.0 && x < 0.5) ? 1.0 : 0.0;
           }},
          {"quadratic", [](const TriangularS& s, double x) { return s.norm_squared() * (1.0 + x); }},
          {"constant", [](const TriangularS&, double) { return 0.3; }}};
}

Report qp_suite(const RunConfig& cfg) {
  Rows r{"qp", cfg.seed, {}};
  const RadialWindow window{cfg.window_min, cfg.window_max};
  const YFunction half = [](const TriangularS& s, double) { return 0.5 * s.norm_squared(); };
  MuQuadrature q;
  q.r_breaks = {0.5, 2.0};
  q.x_breaks = {0.5};

  Plot plot{"cf_convergence.svg", "Characteristic functional: running MC mean", "samples", "value", true, false, {}};
  std::vector<Signature> sigs{{1, 2}};
  if (cfg.p != 1) sigs.push_back({cfg.p, cfg.q});
  std::uint64_t stream = 601;
  for (const auto& sig : sigs) {
    const auto t = make_qp_triple(power_law_measure(sig), half, window);
    for (const auto& [name, f] : canonical_tests(half)) {
      const auto c = characteristic_functional_check(t, f, cfg.samples, cfg.seed + stream++, q);
      r.sigma("cf." + name + sig_tag(sig), "e^{c_R} E exp(-sum f) = exp(int (e^-f - e^-u) dmu)", c.mc, c.closed,
              c.std_error, 3.0, 1e-10 * std::abs(c.closed));
      if (sig.p == 1 && (name == "indicator" || name == "quadratic")) {
        PlotSeries run{name + " MC", {}, {}, {}, true}, ref{name + " closed", {}, {}, {}, true};
        for (const auto& [n, v] : c.running) {
          run.x.push_back(static_cast<double>(n));
          run.y.push_back(v);
          ref.x.push_back(static_cast<double>(n));
          ref.y.push_back(c.closed);
        }
        plot.series.push_back(run);
        plot.series.push_back(ref);
      }
    }
  }
  r.report.plots.push_back(plot);

  // u ≡ 0: classical Poisson.
  const Signature sig{cfg.p, cfg.q};
  const auto zero = make_qp_triple(power_law_measure(sig), [](const TriangularS&, double) { return 0.0; }, window);
  const ConfigurationSampler sampler(zero, q);
  r.near("poisson.c_R", "u = 0 gives c_R = 0", sampler.log_weight(), 0.0, 0.0);
  const double mass = sampler.mean_count();
  const double omega = positive_sphere_area(sig.p);
  Rng br = make_stream(cfg.seed, 610);
  struct Box {
    double r0, r1, x0, x1;
  };
  std::vector<Box> boxes;
  for (int i = 0; i < 10; ++i) {
    const double a = std::log(cfg.window_min), b = std::log(cfg.window_max);
    double l0 = a + (b - a) * uniform01(br), l1 = a + (b - a) * uniform01(br);
    double x0 = uniform01(br), x1 = uniform01(br);
    if (l0 > l1) std::swap(l0, l1);
    if (x0 > x1) std::swap(x0, x1);
    boxes.push_back({std::exp(l0), std::exp(l1), x0, x1});
  }
  const Box left{cfg.window_min, cfg.window_max, 0.0, 0.5}, right{cfg.window_min, cfg.window_max, 0.5, 1.0};
  auto inside = [](const Box& b, const YPoint& y) {
    const double rr = std::sqrt(y.s.norm_squared());
    return rr >= b.r0 && rr < b.r1 && y.x >= b.x0 && y.x < b.x1;
  };
  Rng pr = make_stream(cfg.seed, 611);
  std::vector<double> counts, left_n, right_n;
  std::vector<std::vector<double>> empty(boxes.size());
  for (long i = 0; i < cfg.samples; ++i) {
    const auto c = sampler.sample(pr);
    counts.push_back(static_cast<double>(c.points.size()));
    double nl = 0, nr = 0;
    for (const auto& y : c.points) {
      nl += inside(left, y);
      nr += inside(right, y);
    }
    left_n.push_back(nl);
    right_n.push_back(nr);
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      bool none = true;
      for (const auto& y : c.points) none = none && !inside(boxes[b], y);
      empty[b].push_back(none ? 1.0 : 0.0);
    }
  }
  const double n = static_cast<double>(cfg.samples);
  const auto cm = mean_estimate(counts);
  r.sigma("poisson.mean_count" + sig_tag(sig), "E N(W) = mu(W)", cm.value, mass, cm.std_error);
  double var = 0.0;
  for (double c : counts) var += (c - cm.value) * (c - cm.value);
  var /= n - 1.0;
  r.sigma("poisson.variance" + sig_tag(sig), "Var N(W) = mu(W)", var, mass, std::sqrt((mass + 2.0 * mass * mass) / n));
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    const double mu_b = omega * std::log(boxes[b].r1 / boxes[b].r0) * (boxes[b].x1 - boxes[b].x0);
    const double expect = std::exp(-mu_b);
    const auto e = mean_estimate(empty[b]);
    r.sigma("poisson.void[" + std::to_string(b) + "]", "P(no point in B) = exp(-mu(B))", e.value, expect,
            std::sqrt(expect * (1.0 - expect) / n));
  }
  const auto ml = mean_estimate(left_n), mr = mean_estimate(right_n);
  double cov = 0.0;
  for (std::size_t i = 0; i < left_n.size(); ++i) cov += (left_n[i] - ml.value) * (right_n[i] - mr.value);
  cov /= n - 1.0;
  r.sigma("poisson.independence", "Cov(N(B1), N(B2)) = 0 for disjoint B1, B2", cov, 0.0,
          std::sqrt(ml.value * mr.value / n));
  const auto cc = characteristic_functional_check(zero, [](const TriangularS&, double) { return 0.3; }, cfg.samples,
                                                  cfg.seed + 620, q);
  r.sigma("poisson.cf.constant", "E exp(-c N(W)) = exp((e^-c - 1) mu(W))", cc.mc, std::exp((std::exp(-0.3) - 1.0) * mass),
          cc.std_error);

  // Quasi-invariance, p = 1.
  const Signature s1{1, 2};
  const SCurrent shift(CurrentVariant::triangular, {0.0, 0.5, 1.0},
                       {TriangularS(s1, CMatrix::Constant(1, 1, 1.3)), TriangularS(s1, CMatrix::Constant(1, 1, 0.8))});
  const std::vector<NamedTest> tests{{"u", half},
                                     {"indicator", canonical_tests(half)[2].f},
                                     {"quadratic", canonical_tests(half)[3].f}};
  std::vector<QuasiInvarianceReport> at;
  std::vector<double> j2;
  for (int k = 0; k < 2; ++k) {
    const RadialWindow w{cfg.window_min, cfg.window_max * (k == 0 ? 1.0 : 2.0)};
    const auto t = make_qp_triple(power_law_measure(s1), half, w);
    at.push_back(quasi_invariance_estimate(t, shift, tests, cfg.samples, cfg.seed + 630 + static_cast<std::uint64_t>(k)));
    j2.push_back(translation_factor(t, shift));
  }
  // Exact windowed value: int_a^b e^{-c s^2} ds/s = (E1(c a^2) - E1(c b^2)) / 2. As the window
  // opens this tends to sqrt(1.3 * 0.8).
  const auto e1 = [](double x) { return -std::expint(-x); };
  const auto radial = [&](double c) {
    return 0.5 * (e1(c * cfg.window_min * cfg.window_min) - e1(c * cfg.window_max * cfg.window_max));
  };
  const double j2_exact = std::exp(0.5 * (radial(0.5 / (1.3 * 1.3)) - radial(0.5)) +
                                   0.5 * (radial(0.5 / (0.8 * 0.8)) - radial(0.5)));
  r.near("qi.J2_quadrature", "J2 = exp(int_W (e^{-u(s s0^-1)} - e^{-u(s)}) dmu), u = s^2/2, exponential-integral form",
         j2[0], j2_exact, 1e-8);
  r.sigma("qi.mass_ratio", "translated/original total mass (f = 0) = J2", at[0].mass_ratio.ratio, j2[0],
          at[0].mass_ratio.std_error);
  r.sigma("qi.ratio.u", "translated/original CF at f = u equals J2", at[0].entries[0].ratio, j2[0],
          at[0].entries[0].std_error);
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto& a = at[0].entries[i];
    const auto& b = at[1].entries[i];
    r.sigma("qi.window_stable." + a.name, "CF ratio finite and stable from R to 2R", a.ratio, b.ratio,
            std::hypot(a.std_error, b.std_error));
  }
  r.sigma("qi.window_stable.mass", "mass ratio finite and stable from R to 2R", at[0].mass_ratio.ratio,
          at[1].mass_ratio.ratio, std::hypot(at[0].mass_ratio.std_error, at[1].mass_ratio.std_error));
  r.add("qi.bound", "sup over tests of the CF ratio is finite", at[0].sup_ratio, kNaN, kNaN, kNaN,
        std::isfinite(at[0].sup_ratio));
  return r.report;
}

// --- currents ---------------------------------------------------------------------------

Report currents_suite(const RunConfig& cfg) {
  Rows r{"currents", cfg.seed, {}};
  const Signature sig{1, 2};
  const SignVector eps = SignVector::all_plus(1);
  const auto nu = power_law_measure(sig);
  const auto t = make_qp_triple(nu, [](const TriangularS& s, double) { return s.norm_squared(); },
                                {cfg.window_min, cfg.window_max});
  const auto id = IwasawaElement::identity(sig);
  Rng rng = make_stream(cfg.seed, 701);
  ExpectationConfig ec;
  ec.n_samples = cfg.samples;

  const auto one = expectation_functional(PCurrent::identity(CurrentVariant::iwasawa, sig), t, eps, ec);
  r.near("phi.identity", "Phi(e) = 1", std::abs(one.value - 1.0), 0.0, 0.0);

  for (int k = 0; k < 10; ++k) {
    const double cut = 0.2 + 0.6 * uniform01(rng);
    const auto a = random_iwasawa(sig, rng), b = random_iwasawa(sig, rng);
    PCurrent g1(CurrentVariant::iwasawa, {0.0, cut, 1.0}, {a, id});
    PCurrent g2(CurrentVariant::iwasawa, {0.0, cut, 1.0}, {id, b});
    ec.seed = cfg.seed;
    ec.stream = 710 + 3 * static_cast<std::uint64_t>(k);
    const auto fc = factorization_check(g1, g2, t, eps, ec);
    r.add("factorization[" + std::to_string(k) + "]", "Phi(g1 g2) = Phi(g1) Phi(g2) for disjoint supports",
          fc.deviation, 0.0, fc.combined_std_error, 3.0 * fc.combined_std_error + 1e-12, fc.agrees);
    if (k < 3) {
      const cplx exact = expectation_closed_form(current_mul(g1, g2), t, eps);
      r.sigma("phi.closed_form[" + std::to_string(k) + "]", "Phi(g) = exp(int (<U(g)v, v> - e^-u) dmu)",
              std::abs(fc.phi12.value - exact), 0.0, fc.phi12.std_error);
    }
  }

  const HeisenbergElement hn = random_heisenberg(sig, rng);
  PCurrent nc(CurrentVariant::iwasawa, {0.0, 0.5, 1.0}, {IwasawaElement::from_heisenberg(hn), id});
  ec.stream = 760;
  const auto pn = expectation_functional(nc, t, eps, ec);
  r.bound("phi.unitary_bound", "|Phi(n)| <= 1 for N-valued currents", std::abs(pn.value), 1.0 + 3.0 * pn.std_error);

  // Constant currents against the group-level algebra, bit for bit.
  bool same_p = true, same_k = true, same_g = true, same_pair = true;
  for (int k = 0; k < 20; ++k) {
    const auto g = random_iwasawa(sig, rng), p = random_iwasawa(sig, rng);
    const auto kk = random_compact(sig, rng);
    const auto gg = random_group(sig, rng);
    const auto v = CocycleCombination::generator(p, complex_normal(rng));
    const auto cv = CurrentCocycleCombination::generator(PCurrent::constant(CurrentVariant::iwasawa, p),
                                                         v.terms().front().first);
    same_p = same_p && bit_equal(act_current_iwasawa(PCurrent::constant(CurrentVariant::iwasawa, g), cv),
                                 act_iwasawa(g, v));
    same_k = same_k && bit_equal(act_current_compact(GCurrent::constant(CurrentVariant::compact, kk), cv),
                                 act_compact(kk, v));
    same_g = same_g &&
             bit_equal(act_current_group(GCurrent::constant(CurrentVariant::group, gg), cv), act_group(gg, v));
    const auto s = random_triangular(sig, rng);
    Configuration w;
    w.points.push_back({s, uniform01(rng)});
    w.outside.push_back(false);
    const double f = gaussian_weight()(s);
    same_pair = same_pair && pair_against_vacuum(PCurrent::constant(CurrentVariant::iwasawa, g), w, eps, nu) ==
                                 pair_point(g, s, eps, nu) / (f * f);
  }
  r.add("constant.iwasawa", "constant P-current acts as its value", same_p, 1.0, kNaN, 0.0, same_p);
  r.add("constant.compact", "constant K-current acts as its value", same_k, 1.0, kNaN, 0.0, same_k);
  r.add("constant.group", "constant G-current acts as its value", same_g, 1.0, kNaN, 0.0, same_g);
  r.add("constant.pairing", "single-point pairing is the fiber matrix element", same_pair, 1.0, kNaN, 0.0, same_pair);

  double hom = 0.0, centre = 0.0, local = 0.0;
  for (int k = 0; k < 20; ++k) {
    auto mk = [&] { return random_group(sig, rng); };
    const auto g1 = random_current<GroupElement>(CurrentVariant::group, 1 + k % 4, rng, mk);
    const auto g2 = random_current<GroupElement>(CurrentVariant::group, 1 + (k / 4) % 4, rng, mk);
    CurrentCocycleCombination v;
    for (int i = 0; i < 2; ++i) {
      const cplx c = complex_normal(rng);
      v.add(c, random_current<IwasawaElement>(CurrentVariant::iwasawa, 1 + (k + i) % 3, rng,
                                              [&] { return random_iwasawa(sig, rng); }));
    }
    hom = std::max(hom, max_coeff(act_current_group(g1, act_current_group(g2, v)) -
                                  act_current_group(current_mul(g1, g2), v)));
    const GCurrent c(CurrentVariant::group, {0.0, 0.3, 1.0},
                     {central_element(sig, 2.0 * uniform01(rng)), central_element(sig, -1.0 + uniform01(rng))});
    centre = std::max(centre, max_coeff(act_current_group(c, v) - v));
    const double cut = 0.2 + 0.6 * uniform01(rng);
    const auto e = GroupElement::identity(sig);
    const GCurrent a(CurrentVariant::group, {0.0, cut, 1.0}, {mk(), e}), b(CurrentVariant::group, {0.0, cut, 1.0}, {e, mk()});
    local = std::max(local, max_coeff(act_current_group(a, act_current_group(b, v)) -
                                      act_current_group(b, act_current_group(a, v))));
  }
  r.bound("homomorphism(1,2)", "current-level B is a homomorphism on generators", hom, 1e-9);
  r.bound("center", "central currents act trivially", centre, 1e-9);
  r.bound("locality", "operators of disjointly supported currents commute", local, 1e-9);
  return r.report;
}

} // namespace

Report run_suite(const std::string& name, const RunConfig& cfg) {
  validate(cfg);
  static const std::map<std::string, std::function<Report(const RunConfig&)>> suites{
      {"group", group_suite},     {"iwasawa", iwasawa_suite}, {"bargmann", bargmann_suite},
      {"special", special_suite}, {"extension", extension_suite}, {"qp", qp_suite},
      {"currents", currents_suite}};
  if (name == "all") {
    Report out;
    for (const auto& n : suite_names()) out.append(suites.at(n)(cfg));
    return out;
  }
  const auto it = suites.find(name);
  if (it == suites.end()) throw ConfigInvalid("unknown suite '" + name + "'");
  return it->second(cfg);
}

void write_report(const Report& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write = [&](const std::string& file, const std::string& text) {
    std::ofstream out(fs::path(out_dir) / file, std::ios::binary);
    if (!out) throw ConfigInvalid("cannot write " + (fs::path(out_dir) / file).string());
    out << text;
  };
  write("report.json", to_json(report).dump(2) + "\n");
  write("report.csv", to_csv(report));
  for (const auto& p : report.plots) write(p.file, render_svg(p));
}

} // namespace upq
