#pragma once

#include "upq/upq_group.hpp"

namespace upq {

/// Lower-triangular p×p complex matrix with real positive diagonal.
class TriangularS {
public:
  TriangularS(Signature sig, CMatrix s);

  static TriangularS identity(const Signature& sig);

  const Signature& sig() const { return sig_; }
  const CMatrix& matrix() const { return s_; }

  /// |s|² = tr(ss*).
  double norm_squared() const { return s_.squaredNorm(); }

  TriangularS inverse() const;
  friend TriangularS operator*(const TriangularS& a, const TriangularS& b);

private:
  Signature sig_;
  CMatrix s_;
};

/// Element (n, z) of the Heisenberg group N: n skew-Hermitian p×p, z p×(q−p).
class HeisenbergElement {
public:
  HeisenbergElement(Signature sig, CMatrix n, CMatrix z);

  static HeisenbergElement identity(const Signature& sig);

  const Signature& sig() const { return sig_; }
  const CMatrix& n() const { return n_; }
  const CMatrix& z() const { return z_; }

  /// ζ = n − ½zz*, the (3,1) block of the matrix form.
  CMatrix zeta() const;
  HeisenbergElement inverse() const;

private:
  Signature sig_;
  CMatrix n_;
  CMatrix z_;
};

/// Group law (n₁+n₂−½(z₁z₂*−z₂z₁*), z₁+z₂).
HeisenbergElement heis_mul(const HeisenbergElement& a, const HeisenbergElement& b);

/// Automorphism (n, z) ↦ (sns*, sz); equals conjugation by the S-matrix.
HeisenbergElement s_act(const TriangularS& s, const HeisenbergElement& h);

/// Element of P in coordinates p = S(s)·N(n, z).
struct IwasawaElement {
  TriangularS s;
  HeisenbergElement h;

  static IwasawaElement identity(const Signature& sig);
  static IwasawaElement from_s(const TriangularS& s);
  static IwasawaElement from_heisenberg(const HeisenbergElement& h);

  const Signature& sig() const { return s.sig(); }
};

IwasawaElement p_mul(const IwasawaElement& a, const IwasawaElement& b);
IwasawaElement p_inv(const IwasawaElement& a);

/// Block lower-triangular matrix ((s*)⁻¹,0,0; −z*,e,0; sζ,sz,s).
GroupElement embed(const IwasawaElement& a);

/// Largest absolute coordinate difference between two elements.
double coordinate_distance(const IwasawaElement& a, const IwasawaElement& b);

/// Coordinate equality within tol·max(1, scale).
bool approx_equal(const IwasawaElement& a, const IwasawaElement& b, double tol = 1e-8);

struct IwasawaDecomposition {
  IwasawaElement p;
  GroupElement k;
};

/// g = embed(p)·k with k ∈ K, solved blockwise from gg* = pp*.
IwasawaDecomposition iwasawa_decompose(const GroupElement& g);

/// For k ∈ K and a ∈ P: k·a = p′·k′.
IwasawaDecomposition k_conjugate(const GroupElement& k, const IwasawaElement& a);

struct IwasawaSampling {
  double diag_log_sigma = 0.3;
  double offdiag_scale = 0.3;
  double n_scale = 0.5;
  double z_scale = 0.5;
};

TriangularS random_triangular(const Signature& sig, Rng& rng, const IwasawaSampling& cfg = {});
HeisenbergElement random_heisenberg(const Signature& sig, Rng& rng, const IwasawaSampling& cfg = {});
IwasawaElement random_iwasawa(const Signature& sig, Rng& rng, const IwasawaSampling& cfg = {});

/// Random skew-Hermitian p×p matrix with entries of the given scale.
CMatrix random_skew_hermitian(int p, Rng& rng, double scale);

} // namespace upq
