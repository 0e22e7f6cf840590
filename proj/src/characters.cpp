#include "upq/characters.hpp"

#include <algorithm>
#include <sstream>

namespace upq {

SignVector::SignVector(std::vector<int> eps) : eps_(std::move(eps)) {
  if (eps_.empty()) throw InvalidInput("sign vector is empty");
  for (int e : eps_)
    if (e != 1 && e != -1) throw InvalidInput("sign vector entries must be +1 or -1");
}

SignVector SignVector::all_plus(int p) { return SignVector(std::vector<int>(static_cast<std::size_t>(p), 1)); }

CMatrix SignVector::matrix() const {
  CMatrix e = CMatrix::Zero(size(), size());
  for (int i = 0; i < size(); ++i) e(i, i) = static_cast<double>(eps_[static_cast<std::size_t>(i)]);
  return e;
}

bool SignVector::all_plus() const {
  return std::all_of(eps_.begin(), eps_.end(), [](int e) { return e == 1; });
}

std::string to_string(const SignVector& eps) {
  std::string out;
  for (int i = 0; i < eps.size(); ++i) {
    if (i) out += ',';
    out += eps[i] > 0 ? '+' : '-';
  }
  return out;
}

SignVector parse_sign_vector(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok == "+" || tok == "1" || tok == "+1")
      out.push_back(1);
    else if (tok == "-" || tok == "-1")
      out.push_back(-1);
    else
      throw InvalidInput("cannot parse sign '" + tok + "'");
  }
  return SignVector(std::move(out));
}

cplx char_eval(const SignVector& eps, const TriangularS& s, const CMatrix& n) {
  if (eps.size() != s.sig().p || n.rows() != s.sig().p || n.cols() != s.sig().p)
    throw DimensionMismatch("character arguments must be p x p with p = " + std::to_string(s.sig().p));
  if (skew_hermitian_defect(n) > 1e-12 * std::max(1.0, n.norm()))
    throw NotSkewHermitian("character argument must satisfy n + n* = 0");
  const CMatrix m = s.matrix() * n * s.matrix().adjoint();
  cplx tr = 0.0;
  for (int i = 0; i < eps.size(); ++i) tr += static_cast<double>(eps[i]) * m(i, i);
  // The trace is imaginary up to rounding; drop the real residue.
  return std::exp(cplx(0.0, tr.imag()));
}

bool orbit_separation(const SignVector& eps1, const SignVector& eps2,
                      const std::vector<std::pair<TriangularS, CMatrix>>& samples, double tol) {
  if (eps1 == eps2) throw InvalidInput("orbit_separation needs two different sign vectors");
  return std::any_of(samples.begin(), samples.end(), [&](const auto& sn) {
    return std::abs(char_eval(eps1, sn.first, sn.second) - char_eval(eps2, sn.first, sn.second)) > tol;
  });
}

} // namespace upq
