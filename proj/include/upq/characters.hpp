#pragma once

#include <string>
#include <utility>
#include <vector>

#include "upq/iwasawa.hpp"

namespace upq {

/// Diagonal sign matrix ε = diag(ε₁,…,ε_p), entries ±1.
class SignVector {
public:
  SignVector(std::vector<int> eps);

  /// ε = (1,…,1).
  static SignVector all_plus(int p);

  int size() const { return static_cast<int>(eps_.size()); }
  int operator[](int i) const { return eps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& values() const { return eps_; }
  CMatrix matrix() const;
  bool all_plus() const;

  friend bool operator==(const SignVector&, const SignVector&) = default;

private:
  std::vector<int> eps_;
};

std::string to_string(const SignVector& eps);

/// Parses "+,-,+" or "1,-1,1".
SignVector parse_sign_vector(const std::string& text);

/// χ_s^ε(n) = exp(tr(ε·s n s*)). Unit modulus for skew-Hermitian n.
cplx char_eval(const SignVector& eps, const TriangularS& s, const CMatrix& n);

/// True if some sampled (s, n) gives different character values.
bool orbit_separation(const SignVector& eps1, const SignVector& eps2,
                      const std::vector<std::pair<TriangularS, CMatrix>>& samples,
                      double tol = 1e-8);

} // namespace upq
