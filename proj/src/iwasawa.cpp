#include "upq/iwasawa.hpp"

#include <algorithm>
#include <cmath>

namespace upq {

namespace {

constexpr double kStructureTol = 1e-12;

double scale_of(const CMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void require_same(const Signature& a, const Signature& b) {
  if (!(a == b)) throw SignatureMismatch(to_string(a) + " vs " + to_string(b));
}

/// Inverse of a lower-triangular matrix with nonzero diagonal.
CMatrix lower_inverse(const CMatrix& s) {
  return s.triangularView<Eigen::Lower>().solve(CMatrix::Identity(s.rows(), s.cols()));
}

} // namespace

// --- TriangularS -----------------------------------------------------------

TriangularS::TriangularS(Signature sig, CMatrix s) : sig_(sig), s_(std::move(s)) {
  if (s_.rows() != sig_.p || s_.cols() != sig_.p)
    throw DimensionMismatch("s must be " + std::to_string(sig_.p) + "x" + std::to_string(sig_.p));
  const double tol = kStructureTol * scale_of(s_);
  for (int i = 0; i < sig_.p; ++i) {
    for (int j = i + 1; j < sig_.p; ++j)
      if (std::abs(s_(i, j)) > tol) throw InvalidInput("s is not lower triangular");
    if (std::abs(s_(i, i).imag()) > tol || !(s_(i, i).real() > 0.0))
      throw InvalidInput("diagonal of s must be real and positive");
    for (int j = i + 1; j < sig_.p; ++j) s_(i, j) = 0.0;
    s_(i, i) = s_(i, i).real();
  }
  if (!s_.allFinite()) throw InvalidInput("s has non-finite entries");
}

TriangularS TriangularS::identity(const Signature& sig) {
  return TriangularS(sig, CMatrix::Identity(sig.p, sig.p));
}

TriangularS TriangularS::inverse() const { return TriangularS(sig_, lower_inverse(s_)); }

TriangularS operator*(const TriangularS& a, const TriangularS& b) {
  require_same(a.sig_, b.sig_);
  return TriangularS(a.sig_, a.s_ * b.s_);
}

// --- Heisenberg ------------------------------------------------------------

HeisenbergElement::HeisenbergElement(Signature sig, CMatrix n, CMatrix z)
    : sig_(sig), n_(std::move(n)), z_(std::move(z)) {
  if (n_.rows() != sig_.p || n_.cols() != sig_.p)
    throw DimensionMismatch("n must be p x p");
  if (z_.rows() != sig_.p || z_.cols() != sig_.mid())
    throw DimensionMismatch("z must be p x (q-p)");
  if (!n_.allFinite() || !z_.allFinite()) throw InvalidInput("non-finite Heisenberg coordinates");
  if (skew_hermitian_defect(n_) > kStructureTol * scale_of(n_))
    throw NotSkewHermitian("n + n* = " + std::to_string(skew_hermitian_defect(n_)));
}

HeisenbergElement HeisenbergElement::identity(const Signature& sig) {
  return HeisenbergElement(sig, CMatrix::Zero(sig.p, sig.p), CMatrix::Zero(sig.p, sig.mid()));
}

CMatrix HeisenbergElement::zeta() const { return n_ - 0.5 * z_ * z_.adjoint(); }

HeisenbergElement HeisenbergElement::inverse() const { return HeisenbergElement(sig_, -n_, -z_); }

HeisenbergElement heis_mul(const HeisenbergElement& a, const HeisenbergElement& b) {
  require_same(a.sig(), b.sig());
  const CMatrix w = a.z() * b.z().adjoint();
  const CMatrix omega = w - w.adjoint();
  return HeisenbergElement(a.sig(), a.n() + b.n() - 0.5 * omega, a.z() + b.z());
}

HeisenbergElement s_act(const TriangularS& s, const HeisenbergElement& h) {
  require_same(s.sig(), h.sig());
  const CMatrix& m = s.matrix();
  return HeisenbergElement(h.sig(), skew_part(m * h.n() * m.adjoint()), m * h.z());
}

// --- P = S ⋉ N -------------------------------------------------------------

IwasawaElement IwasawaElement::identity(const Signature& sig) {
  return {TriangularS::identity(sig), HeisenbergElement::identity(sig)};
}

IwasawaElement IwasawaElement::from_s(const TriangularS& s) {
  return {s, HeisenbergElement::identity(s.sig())};
}

IwasawaElement IwasawaElement::from_heisenberg(const HeisenbergElement& h) {
  return {TriangularS::identity(h.sig()), h};
}

IwasawaElement p_mul(const IwasawaElement& a, const IwasawaElement& b) {
  require_same(a.sig(), b.sig());
  // S(s1)N(h1)S(s2)N(h2) = S(s1 s2)·N(s2⁻¹·h1·s2)·N(h2)
  return {a.s * b.s, heis_mul(s_act(b.s.inverse(), a.h), b.h)};
}

IwasawaElement p_inv(const IwasawaElement& a) {
  // (S(s)N(h))⁻¹ = N(h⁻¹)S(s⁻¹) = S(s⁻¹)·N(s·h⁻¹·s⁻¹)
  return {a.s.inverse(), s_act(a.s, a.h.inverse())};
}

GroupElement embed(const IwasawaElement& a) {
  const Signature& sig = a.sig();
  const int p = sig.p, m = sig.mid();
  const CMatrix& s = a.s.matrix();
  const CMatrix& z = a.h.z();
  CMatrix g = CMatrix::Zero(sig.n(), sig.n());
  g.block(0, 0, p, p) = lower_inverse(s).adjoint();
  g.block(p, 0, m, p) = -z.adjoint();
  g.block(p, p, m, m).setIdentity();
  g.block(p + m, 0, p, p) = s * a.h.zeta();
  g.block(p + m, p, p, m) = s * z;
  g.block(p + m, p + m, p, p) = s;
  return unchecked_element(sig, std::move(g));
}

double coordinate_distance(const IwasawaElement& a, const IwasawaElement& b) {
  require_same(a.sig(), b.sig());
  double d = (a.s.matrix() - b.s.matrix()).cwiseAbs().maxCoeff();
  d = std::max(d, (a.h.n() - b.h.n()).cwiseAbs().maxCoeff());
  if (a.h.z().size() > 0) d = std::max(d, (a.h.z() - b.h.z()).cwiseAbs().maxCoeff());
  return d;
}

bool approx_equal(const IwasawaElement& a, const IwasawaElement& b, double tol) {
  if (!(a.sig() == b.sig())) return false;
  double scale = std::max({1.0, a.s.matrix().cwiseAbs().maxCoeff(), a.h.n().cwiseAbs().maxCoeff()});
  if (a.h.z().size() > 0) scale = std::max(scale, a.h.z().cwiseAbs().maxCoeff());
  return coordinate_distance(a, b) <= tol * scale;
}

IwasawaDecomposition iwasawa_decompose(const GroupElement& g) {
  const Signature& sig = g.sig();
  const int p = sig.p, m = sig.mid();
  const CMatrix mm = g.matrix() * g.matrix().adjoint();

  // (1,1) block: (ss*)⁻¹.
  const CMatrix m11 = mm.block(0, 0, p, p);
  Eigen::LLT<CMatrix> llt((m11 + m11.adjoint()) * cplx(0.5));
  if (llt.info() != Eigen::Success) throw DecompositionFailed("(1,1) block of gg* is not positive");
  const CMatrix sst = llt.solve(CMatrix::Identity(p, p));
  CMatrix s;
  try {
    s = cholesky_lower(sst, 1e-8);
  } catch (const Error& e) {
    throw DecompositionFailed(e.what());
  }
  const CMatrix s_inv = lower_inverse(s);

  // (1,2) block is −s^{-*}z, (3,1) block is sζs⁻¹.
  const CMatrix z = -s.adjoint() * mm.block(0, p, p, m);
  const CMatrix zeta = s_inv * mm.block(p + m, 0, p, p) * s;
  const CMatrix n = zeta + 0.5 * z * z.adjoint();
  const double scale = std::max(1.0, n.cwiseAbs().maxCoeff());
  if (!n.allFinite() || skew_hermitian_defect(n) > 1e-6 * scale)
    throw DecompositionFailed("central part is not skew-Hermitian (defect " +
                              std::to_string(skew_hermitian_defect(n)) + ")");

  IwasawaElement pe{TriangularS(sig, s), HeisenbergElement(sig, skew_part(n), z)};
  GroupElement k = embed(pe).inverse() * g;
  if (unitarity_defect(k.matrix()) > 1e-6)
    throw DecompositionFailed("compact factor is not unitary (defect " +
                              std::to_string(unitarity_defect(k.matrix())) + ")");
  return {std::move(pe), std::move(k)};
}

IwasawaDecomposition k_conjugate(const GroupElement& k, const IwasawaElement& a) {
  if (unitarity_defect(k.matrix()) > kMembershipTol)
    throw InvalidInput("k_conjugate needs k in K (kk* = I)");
  return iwasawa_decompose(k * embed(a));
}

// --- sampling --------------------------------------------------------------

CMatrix random_skew_hermitian(int p, Rng& rng, double scale) {
  const CMatrix g = complex_gaussian_matrix(rng, p, p, scale);
  return skew_part(g);
}

TriangularS random_triangular(const Signature& sig, Rng& rng, const IwasawaSampling& cfg) {
  CMatrix s = CMatrix::Zero(sig.p, sig.p);
  for (int i = 0; i < sig.p; ++i) {
    s(i, i) = std::exp(cfg.diag_log_sigma * std_normal(rng));
    for (int j = 0; j < i; ++j) s(i, j) = complex_normal(rng, cfg.offdiag_scale);
  }
  return TriangularS(sig, std::move(s));
}

HeisenbergElement random_heisenberg(const Signature& sig, Rng& rng, const IwasawaSampling& cfg) {
  CMatrix n = random_skew_hermitian(sig.p, rng, cfg.n_scale);
  CMatrix z = complex_gaussian_matrix(rng, sig.p, sig.mid(), cfg.z_scale);
  return HeisenbergElement(sig, std::move(n), std::move(z));
}

IwasawaElement random_iwasawa(const Signature& sig, Rng& rng, const IwasawaSampling& cfg) {
  auto s = random_triangular(sig, rng, cfg);
  auto h = random_heisenberg(sig, rng, cfg);
  return {std::move(s), std::move(h)};
}

} // namespace upq
