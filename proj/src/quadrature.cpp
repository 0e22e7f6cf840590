#include "upq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "upq/errors.hpp"

namespace upq {

namespace {

/// Eigen-decomposition of the symmetric tridiagonal Jacobi matrix; μ₀ is the
/// total mass of the weight.
GaussRule golub_welsch(int n, double mu0, double (*offdiag)(int)) {
  if (n < 1) throw InvalidInput("a Gauss rule needs at least one node");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = offdiag(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  GaussRule rule;
  for (int k = 0; k < n; ++k) {
    rule.nodes.push_back(es.eigenvalues()(k));
    const double v0 = es.eigenvectors()(0, k);
    rule.weights.push_back(mu0 * v0 * v0);
  }
  return rule;
}

} // namespace

GaussRule gauss_hermite(int n) {
  return golub_welsch(n, std::sqrt(std::numbers::pi), [](int k) { return std::sqrt(k / 2.0); });
}

GaussRule gauss_legendre(int n) {
  return golub_welsch(n, 2.0, [](int k) { return k / std::sqrt(4.0 * k * k - 1.0); });
}

double composite_legendre(const std::function<double(double)>& g, double a, double b,
                          const std::vector<double>& breaks, double max_width, int nodes) {
  if (!(b > a)) return 0.0;
  std::vector<double> edges{a, b};
  for (double x : breaks)
    if (x > a && x < b) edges.push_back(x);
  std::sort(edges.begin(), edges.end());
  const GaussRule rule = gauss_legendre(nodes);
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double lo = edges[e], hi = edges[e + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = lo + (p + 0.5) * h, half = 0.5 * h;
      for (int i = 0; i < nodes; ++i)
        total += half * rule.weights[static_cast<std::size_t>(i)] * g(c + half * rule.nodes[static_cast<std::size_t>(i)]);
    }
  }
  return total;
}

} // namespace upq
