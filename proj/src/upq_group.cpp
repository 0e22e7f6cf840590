#include "upq/upq_group.hpp"

#include <algorithm>
#include <vector>

namespace upq {

Signature::Signature(int p_, int q_) : p(p_), q(q_) {
  if (p < 1 || q < p)
    throw InvalidInput("signature needs q >= p >= 1, got (" + std::to_string(p_) + "," +
                       std::to_string(q_) + ")");
}

std::string to_string(const Signature& sig) {
  return "(" + std::to_string(sig.p) + "," + std::to_string(sig.q) + ")";
}

GroupElement::GroupElement(Signature sig, CMatrix m, double tol) : sig_(sig), m_(std::move(m)) {
  const auto r = is_member(m_, sig_, tol);
  if (!r.member)
    throw InvalidInput("matrix is not in U" + to_string(sig_) + ", residual " +
                       std::to_string(r.residual));
}

GroupElement unchecked_element(const Signature& sig, CMatrix m) {
  if (m.rows() != sig.n() || m.cols() != sig.n())
    throw DimensionMismatch("group element must be " + std::to_string(sig.n()) + " square");
  return GroupElement(sig, std::move(m), GroupElement::Unchecked{});
}

GroupElement GroupElement::identity(const Signature& sig) {
  return unchecked_element(sig, CMatrix::Identity(sig.n(), sig.n()));
}

GroupElement GroupElement::inverse() const {
  const CMatrix s = sigma(sig_);
  return unchecked_element(sig_, s * m_.adjoint() * s);
}

GroupElement GroupElement::adjoint() const { return unchecked_element(sig_, m_.adjoint()); }

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (!(a.sig_ == b.sig_)) throw SignatureMismatch(to_string(a.sig_) + " vs " + to_string(b.sig_));
  return unchecked_element(a.sig_, a.m_ * b.m_);
}

MembershipResult is_member(const CMatrix& g, const Signature& sig, double tol) {
  if (g.rows() != sig.n() || g.cols() != sig.n())
    throw DimensionMismatch("expected " + std::to_string(sig.n()) + "x" + std::to_string(sig.n()) +
                            ", got " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  const CMatrix s = sigma(sig);
  const CMatrix r = g * s * g.adjoint() - s;
  MembershipResult out;
  out.residual = r.norm();
  out.member = std::isfinite(out.residual) && out.residual <= tol;

  const int off[3] = {0, sig.p, sig.p + sig.mid()};
  const int len[3] = {sig.p, sig.mid(), sig.p};
  const std::pair<int, int> blocks[6] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  for (int b = 0; b < 6; ++b) {
    const auto [i, j] = blocks[b];
    out.block_residuals[b] = r.block(off[i], off[j], len[i], len[j]).norm();
  }
  return out;
}

double unitarity_defect(const CMatrix& k) {
  return (k * k.adjoint() - CMatrix::Identity(k.rows(), k.cols())).norm();
}

namespace {

/// Unitary C whose columns diagonalize σ; C* σ C = diag(−1…, +1…).
struct SigmaBasis {
  CMatrix c;
  int negatives = 0;
};

SigmaBasis sigma_basis(const Signature& sig) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sigma(sig));
  SigmaBasis b;
  b.c = es.eigenvectors();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) < 0.0) ++b.negatives;
  return b;
}

} // namespace

GroupElement random_compact(const Signature& sig, Rng& rng) {
  const auto basis = sigma_basis(sig);
  const int neg = basis.negatives, pos = sig.n() - neg;
  CMatrix d = CMatrix::Zero(sig.n(), sig.n());
  d.topLeftCorner(neg, neg) = haar_unitary(rng, neg);
  d.bottomRightCorner(pos, pos) = haar_unitary(rng, pos);
  return unchecked_element(sig, basis.c * d * basis.c.adjoint());
}

GroupElement involution_w(const Signature& sig) { return unchecked_element(sig, sigma(sig)); }

GroupElement central_element(const Signature& sig, double theta) {
  return unchecked_element(sig, CMatrix::Identity(sig.n(), sig.n()) * std::polar(1.0, theta));
}

std::string to_string(LiePattern pattern) {
  switch (pattern) {
  case LiePattern::full: return "full";
  case LiePattern::heisenberg: return "heisenberg";
  case LiePattern::iwasawa: return "iwasawa";
  case LiePattern::compact: return "compact";
  }
  return "?";
}

namespace {

int block_of(const Signature& sig, int i) {
  if (i < sig.p) return 0;
  if (i < sig.p + sig.mid()) return 1;
  return 2;
}

/// Linear constraints L(X) = 0 written as a real vector.
std::vector<double> constraints(const Signature& sig, LiePattern pattern, const CMatrix& x,
                                const CMatrix& s) {
  std::vector<double> out;
  const CMatrix lin = x * s + s * x.adjoint();
  for (Eigen::Index i = 0; i < lin.size(); ++i) {
    out.push_back(lin.data()[i].real());
    out.push_back(lin.data()[i].imag());
  }
  const int n = sig.n();
  auto zero = [&](int i, int j) {
    out.push_back(x(i, j).real());
    out.push_back(x(i, j).imag());
  };
  switch (pattern) {
  case LiePattern::full: break;
  case LiePattern::compact: {
    const CMatrix skew = x + x.adjoint();
    for (Eigen::Index i = 0; i < skew.size(); ++i) {
      out.push_back(skew.data()[i].real());
      out.push_back(skew.data()[i].imag());
    }
    break;
  }
  case LiePattern::heisenberg:
    // Tangent of N lives in blocks (2,1), (3,1), (3,2).
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int bi = block_of(sig, i), bj = block_of(sig, j);
        if (!(bi > bj)) zero(i, j);
      }
    break;
  case LiePattern::iwasawa:
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int bi = block_of(sig, i), bj = block_of(sig, j);
        if (bi < bj || (bi == 1 && bj == 1)) {
          zero(i, j);
        } else if (bi == 2 && bj == 2) {
          const int li = i - (sig.p + sig.mid()), lj = j - (sig.p + sig.mid());
          if (li < lj) zero(i, j);
          if (li == lj) out.push_back(x(i, j).imag());
        }
      }
    break;
  }
  return out;
}

} // namespace

int lie_algebra_dimension(const Signature& sig, LiePattern pattern) {
  const int n = sig.n();
  const int unknowns = 2 * n * n;
  const CMatrix s = sigma(sig);
  std::vector<std::vector<double>> cols;
  cols.reserve(unknowns);
  for (int k = 0; k < unknowns; ++k) {
    CMatrix x = CMatrix::Zero(n, n);
    const int entry = k / 2;
    x(entry / n, entry % n) = (k % 2 == 0) ? cplx(1, 0) : cplx(0, 1);
    cols.push_back(constraints(sig, pattern, x, s));
  }
  const auto rows = static_cast<Eigen::Index>(cols.front().size());
  Eigen::MatrixXd a(rows, unknowns);
  for (int k = 0; k < unknowns; ++k)
    for (Eigen::Index r = 0; r < rows; ++r) a(r, k) = cols[k][r];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double thresh = 1e-9 * std::max(1.0, sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return unknowns - rank;
}

} // namespace upq
