#pragma once

#include <functional>
#include <vector>

namespace upq {

/// Nodes and weights of a Gauss rule.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// ∫ g(t) e^{−t²} dt over the real line, by Golub–Welsch.
GaussRule gauss_hermite(int n);

/// ∫_{-1}^{1} g(t) dt, by Golub–Welsch.
GaussRule gauss_legendre(int n);

/// Composite Gauss–Legendre on [a, b] with panel edges at `breaks` (points
/// outside (a, b) are ignored) and panels no wider than `max_width`.
double composite_legendre(const std::function<double(double)>& g, double a, double b,
                          const std::vector<double>& breaks, double max_width, int nodes);

} // namespace upq
