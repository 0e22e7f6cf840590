#pragma once

#include <array>
#include <string>

#include "upq/matrix_kernel.hpp"
#include "upq/random.hpp"

namespace upq {

/// Signature (p, q) with q >= p >= 1. Matrices are (p+q)x(p+q) with diagonal
/// blocks of orders p, q-p, p.
struct Signature {
  int p = 1;
  int q = 1;

  Signature() = default;
  Signature(int p_, int q_);

  int n() const { return p + q; }
  int mid() const { return q - p; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

std::string to_string(const Signature& sig);

inline constexpr double kMembershipTol = 1e-8;

/// The block anti-diagonal form σ. σ = σ* = σ⁻¹.
template <typename Scalar = cplx>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> sigma_matrix(const Signature& sig) {
  using M = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int p = sig.p, m = sig.mid(), n = sig.n();
  M s = M::Zero(n, n);
  for (int i = 0; i < p; ++i) {
    s(i, p + m + i) = Scalar(1);
    s(p + m + i, i) = Scalar(1);
  }
  for (int i = 0; i < m; ++i) s(p + i, p + i) = Scalar(1);
  return s;
}

inline CMatrix sigma(const Signature& sig) { return sigma_matrix<cplx>(sig); }

/// Element of U(p,q): g σ g* = σ.
class GroupElement {
public:
  /// Checked construction; throws InvalidInput when gσg* deviates from σ
  /// by more than `tol` in Frobenius norm.
  GroupElement(Signature sig, CMatrix m, double tol = kMembershipTol);

  static GroupElement identity(const Signature& sig);

  const Signature& sig() const { return sig_; }
  const CMatrix& matrix() const { return m_; }

  /// g⁻¹ = σ g* σ, exact on the group.
  GroupElement inverse() const;
  GroupElement adjoint() const;

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);

private:
  struct Unchecked {};
  GroupElement(Signature sig, CMatrix m, Unchecked) : sig_(sig), m_(std::move(m)) {}
  friend GroupElement unchecked_element(const Signature&, CMatrix);

  Signature sig_;
  CMatrix m_;
};

/// Wraps a matrix that is known to lie in the group by construction.
GroupElement unchecked_element(const Signature& sig, CMatrix m);

struct MembershipResult {
  bool member = false;
  double residual = 0.0;
  /// Frobenius norms of the blocks (1,1),(1,2),(1,3),(2,2),(2,3),(3,3) of
  /// gσg* − σ; the remaining blocks are their adjoints.
  std::array<double, 6> block_residuals{};
};

MembershipResult is_member(const CMatrix& g, const Signature& sig, double tol = kMembershipTol);

/// ‖kk* − I‖_F.
double unitarity_defect(const CMatrix& k);

/// Random element of K = U(p,q) ∩ U(p+q), Haar within each block of the
/// σ-diagonalizing basis.
GroupElement random_compact(const Signature& sig, Rng& rng);

/// The involution w = σ, an element of K.
GroupElement involution_w(const Signature& sig);

/// Scalar central element e^{iθ}·I.
GroupElement central_element(const Signature& sig, double theta);

enum class LiePattern { full, heisenberg, iwasawa, compact };

std::string to_string(LiePattern pattern);

/// Real dimension of {X : Xσ + σX* = 0} intersected with the pattern's
/// linear constraints, by numerical rank of the real constraint system.
int lie_algebra_dimension(const Signature& sig, LiePattern pattern);

} // namespace upq
