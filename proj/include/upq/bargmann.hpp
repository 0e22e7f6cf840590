#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "upq/characters.hpp"
#include "upq/quadrature.hpp"

namespace upq {

/// Monomial basis ∏ x_v^{k_v}/√(k_v!) of the p×(q−p) fiber variables, total
/// degree ≤ D. Variables are numbered row-major; ordering is graded (vacuum
/// first, then degree 1, …), lexicographically decreasing within a degree, so
/// every degree-≤d block is a prefix.
class MultiIndexBasis {
public:
  MultiIndexBasis(Signature sig, int max_degree);

  static std::shared_ptr<const MultiIndexBasis> make(const Signature& sig, int max_degree) {
    return std::make_shared<const MultiIndexBasis>(sig, max_degree);
  }

  const Signature& sig() const { return sig_; }
  int max_degree() const { return max_degree_; }
  int n_vars() const { return sig_.p * sig_.mid(); }
  int size() const { return static_cast<int>(indices_.size()); }

  const std::vector<int>& index(int pos) const { return indices_[static_cast<std::size_t>(pos)]; }
  int degree(int pos) const { return degrees_[static_cast<std::size_t>(pos)]; }
  std::optional<int> position(const std::vector<int>& k) const;

  /// Number of basis elements of degree ≤ d (the length of that prefix).
  int block_size(int d) const;

  int row_of(int var) const { return var / sig_.mid(); }

private:
  Signature sig_;
  int max_degree_;
  std::vector<std::vector<int>> indices_;
  std::vector<int> degrees_;
  std::map<std::vector<int>, int> lookup_;
};

using BasisPtr = std::shared_ptr<const MultiIndexBasis>;

/// Truncated Fock-space vector; the basis is orthonormal.
struct BargmannVector {
  BasisPtr basis;
  CVector coeffs;

  static BargmannVector vacuum(const BasisPtr& basis);
  static BargmannVector zero(const BasisPtr& basis);

  double norm() const { return coeffs.norm(); }
  /// ⟨this, other⟩, linear in the first argument.
  cplx inner(const BargmannVector& other) const;
  /// Value of the polynomial at the point x (one entry per variable).
  cplx evaluate(const CVector& x) const;
};

BargmannVector operator+(const BargmannVector& a, const BargmannVector& b);
BargmannVector operator-(const BargmannVector& a, const BargmannVector& b);
BargmannVector operator*(cplx c, const BargmannVector& v);

/// Orthogonal projection onto a smaller basis of the same signature (a
/// prefix, by the graded ordering).
BargmannVector project(const BargmannVector& v, const BasisPtr& target);

/// Operator on the truncated space, stored as its dense matrix.
struct BargmannOperator {
  BasisPtr basis;
  CMatrix m;

  static BargmannOperator identity(const BasisPtr& basis);

  BargmannVector apply(const BargmannVector& v) const;
  /// Restriction to the degree-≤d prefix block.
  CMatrix block(int d) const;
};

BargmannOperator operator*(const BargmannOperator& a, const BargmannOperator& b);

/// Weyl parameters per variable: a = w⁰ on rows with ε_i = +1 and conj(w⁰)
/// on rows with ε_i = −1, where w⁰ = s z⁰.
CVector weyl_parameters(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h);

/// Scalar factor exp(tr(ε s n⁰ s*) − ½|s z⁰|²), which is also the vacuum
/// matrix coefficient.
cplx rep_scalar(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h);

/// Matrix of T_s^ε(n⁰, z⁰): the scalar, multiplication by exp(−Σ x_v ā_v) and
/// the shift x ↦ x + a, compressed exactly onto the degree-≤D space.
BargmannOperator rep_operator(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h,
                              const BasisPtr& basis);
BargmannOperator rep_operator(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h,
                              int max_degree);

/// Single-variable Weyl matrix ⟨e_j, W_a e_k⟩ for j, k ≤ D, unnormalized
/// (without the factor e^{−|a|²/2}).
CMatrix weyl_matrix_1d(cplx a, int max_degree);

/// (A⁺, A⁻) for the variable in row i, column j: multiplication by the fiber
/// coordinate and differentiation, truncated to the basis.
std::pair<BargmannOperator, BargmannOperator> creation_annihilation(const SignVector& eps, int i, int j,
                                                                    const BasisPtr& basis);

/// φ_s^ε(n, z) = exp(tr(ε s n s*) − ½ tr(s z z* s*)) = ⟨T_s^ε(n,z)·1, 1⟩.
cplx spherical_function(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h);

struct VacuumFunctionalResult {
  cplx quadrature;  // with the requested node count
  cplx refined;     // with twice as many nodes
  cplx value_at_zero;
  int nodes = 0;
};

/// Gaussian mean ∫ f dμ of a holomorphic-type vector by tensor Gauss–Hermite
/// quadrature over the real and imaginary parts of every variable.
/// Throws QuadratureUnstable when 2·nodes − 1 < D.
VacuumFunctionalResult vacuum_functional_check(const BargmannVector& f, int nodes);

struct CommutantScan {
  int dimension = 0;
  int block_size = 0;
  std::vector<double> smallest_singular_values; // ascending, at most 5
};

/// Numerical dimension of {X : AX = XA for all A} on the degree-≤D/2 block.
CommutantScan commutant_scan(const std::vector<BargmannOperator>& family, double rel_tol = 1e-8);

} // namespace upq
