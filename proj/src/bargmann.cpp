#include "upq/bargmann.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace upq {

namespace {

void same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (a.get() == b.get()) return;
  if (!(a->sig() == b->sig()) || a->max_degree() != b->max_degree())
    throw DimensionMismatch("operands live on different truncated bases");
}

double factorial(int n) { return std::tgamma(n + 1.0); }

/// Integer power by repeated multiplication; exact 0⁰ = 1.
cplx ipow(cplx z, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

} // namespace

// --- basis -----------------------------------------------------------------

MultiIndexBasis::MultiIndexBasis(Signature sig, int max_degree) : sig_(sig), max_degree_(max_degree) {
  if (max_degree < 0) throw InvalidInput("truncation degree must be >= 0");
  const int nv = n_vars();
  std::vector<int> k(static_cast<std::size_t>(nv), 0);
  // Exponent vectors of total degree d, first exponent decreasing.
  std::function<void(int, int)> fill = [&](int var, int left) {
    if (var == nv - 1 || nv == 0) {
      if (nv > 0) k[static_cast<std::size_t>(var)] = left;
      indices_.push_back(k);
      return;
    }
    for (int e = left; e >= 0; --e) {
      k[static_cast<std::size_t>(var)] = e;
      fill(var + 1, left - e);
    }
    k[static_cast<std::size_t>(var)] = 0;
  };
  for (int d = 0; d <= (nv == 0 ? 0 : max_degree); ++d) {
    const auto before = indices_.size();
    fill(0, d);
    degrees_.insert(degrees_.end(), indices_.size() - before, d);
  }
  for (int i = 0; i < size(); ++i) lookup_.emplace(indices_[static_cast<std::size_t>(i)], i);
}

std::optional<int> MultiIndexBasis::position(const std::vector<int>& k) const {
  const auto it = lookup_.find(k);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

int MultiIndexBasis::block_size(int d) const {
  return static_cast<int>(std::upper_bound(degrees_.begin(), degrees_.end(), d) - degrees_.begin());
}

// --- vectors and operators -------------------------------------------------

BargmannVector BargmannVector::vacuum(const BasisPtr& basis) {
  BargmannVector v = zero(basis);
  v.coeffs(0) = 1.0;
  return v;
}

BargmannVector BargmannVector::zero(const BasisPtr& basis) {
  return {basis, CVector::Zero(basis->size())};
}

cplx BargmannVector::inner(const BargmannVector& other) const {
  same_basis(basis, other.basis);
  return other.coeffs.dot(coeffs); // Eigen's dot conjugates its left operand
}

cplx BargmannVector::evaluate(const CVector& x) const {
  if (x.size() != basis->n_vars()) throw DimensionMismatch("evaluation point has wrong length");
  cplx total = 0.0;
  for (int pos = 0; pos < basis->size(); ++pos) {
    if (coeffs(pos) == cplx(0.0)) continue;
    cplx mono = 1.0;
    const auto& k = basis->index(pos);
    for (int v = 0; v < basis->n_vars(); ++v) {
      const int e = k[static_cast<std::size_t>(v)];
      if (e) mono *= ipow(x(v), e) / std::sqrt(factorial(e));
    }
    total += coeffs(pos) * mono;
  }
  return total;
}

BargmannVector operator+(const BargmannVector& a, const BargmannVector& b) {
  same_basis(a.basis, b.basis);
  return {a.basis, a.coeffs + b.coeffs};
}

BargmannVector operator-(const BargmannVector& a, const BargmannVector& b) {
  same_basis(a.basis, b.basis);
  return {a.basis, a.coeffs - b.coeffs};
}

BargmannVector operator*(cplx c, const BargmannVector& v) { return {v.basis, c * v.coeffs}; }

BargmannVector project(const BargmannVector& v, const BasisPtr& target) {
  if (!(target->sig() == v.basis->sig())) throw SignatureMismatch("projection across signatures");
  if (target->max_degree() > v.basis->max_degree()) throw InvalidInput("projection target is larger than the source");
  return {target, v.coeffs.head(target->size())};
}

BargmannOperator BargmannOperator::identity(const BasisPtr& basis) {
  return {basis, CMatrix::Identity(basis->size(), basis->size())};
}

BargmannVector BargmannOperator::apply(const BargmannVector& v) const {
  same_basis(basis, v.basis);
  return {basis, m * v.coeffs};
}

CMatrix BargmannOperator::block(int d) const {
  const int b = basis->block_size(d);
  return m.topLeftCorner(b, b);
}

BargmannOperator operator*(const BargmannOperator& a, const BargmannOperator& b) {
  same_basis(a.basis, b.basis);
  return {a.basis, a.m * b.m};
}

// --- representation operators ----------------------------------------------

CVector weyl_parameters(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h) {
  const Signature& sig = h.sig();
  if (eps.size() != sig.p) throw DimensionMismatch("sign vector length must be p");
  const CMatrix w0 = s.matrix() * h.z();
  CVector a(sig.p * sig.mid());
  for (int i = 0; i < sig.p; ++i)
    for (int j = 0; j < sig.mid(); ++j)
      a(i * sig.mid() + j) = eps[i] > 0 ? w0(i, j) : std::conj(w0(i, j));
  return a;
}

cplx rep_scalar(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h) {
  if (eps.size() != h.sig().p) throw DimensionMismatch("sign vector length must be p");
  const CMatrix& sm = s.matrix();
  const CMatrix c = sm * h.n() * sm.adjoint();
  cplx tr = 0.0;
  for (int i = 0; i < eps.size(); ++i) tr += static_cast<double>(eps[i]) * c(i, i);
  const double w2 = (sm * h.z()).squaredNorm();
  return std::exp(tr - 0.5 * w2);
}

CMatrix weyl_matrix_1d(cplx a, int d) {
  // ⟨e_j, M S e_k⟩ with S: x^k ↦ (x+a)^k and M: multiplication by e^{−xā}.
  // The inner sum over the intermediate degree l ≤ min(j,k) is exact.
  CMatrix w = CMatrix::Zero(d + 1, d + 1);
  const cplx mab = -std::conj(a);
  for (int j = 0; j <= d; ++j)
    for (int k = 0; k <= d; ++k) {
      cplx sum = 0.0;
      for (int l = 0; l <= std::min(j, k); ++l) {
        const double c = std::sqrt(factorial(j) * factorial(k)) /
                         (factorial(l) * factorial(j - l) * factorial(k - l));
        sum += c * ipow(mab, j - l) * ipow(a, k - l);
      }
      w(j, k) = sum;
    }
  return w;
}

BargmannOperator rep_operator(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h,
                              const BasisPtr& basis) {
  if (!(basis->sig() == h.sig())) throw SignatureMismatch("basis and element signatures differ");
  const cplx c = rep_scalar(eps, s, h);
  const CVector a = weyl_parameters(eps, s, h);
  const int nv = basis->n_vars(), n = basis->size(), d = basis->max_degree();
  std::vector<CMatrix> w;
  w.reserve(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v) w.push_back(weyl_matrix_1d(a(v), d));

  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& jr = basis->index(r);
    for (int col = 0; col < n; ++col) {
      const auto& kc = basis->index(col);
      cplx t = c;
      for (int v = 0; v < nv; ++v)
        t *= w[static_cast<std::size_t>(v)](jr[static_cast<std::size_t>(v)], kc[static_cast<std::size_t>(v)]);
      m(r, col) = t;
    }
  }
  return {basis, std::move(m)};
}

BargmannOperator rep_operator(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h,
                              int max_degree) {
  return rep_operator(eps, s, h, MultiIndexBasis::make(h.sig(), max_degree));
}

std::pair<BargmannOperator, BargmannOperator> creation_annihilation(const SignVector& eps, int i, int j,
                                                                    const BasisPtr& basis) {
  const Signature& sig = basis->sig();
  if (eps.size() != sig.p) throw DimensionMismatch("sign vector length must be p");
  if (i < 0 || i >= sig.p || j < 0 || j >= sig.mid()) throw InvalidInput("variable index out of range");
  const int v = i * sig.mid() + j, n = basis->size();
  CMatrix up = CMatrix::Zero(n, n), down = CMatrix::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    auto k = basis->index(col);
    const int e = k[static_cast<std::size_t>(v)];
    k[static_cast<std::size_t>(v)] = e + 1;
    if (const auto r = basis->position(k)) up(*r, col) = std::sqrt(e + 1.0);
    if (e > 0) {
      k[static_cast<std::size_t>(v)] = e - 1;
      down(*basis->position(k), col) = std::sqrt(static_cast<double>(e));
    }
  }
  return {{basis, std::move(up)}, {basis, std::move(down)}};
}

cplx spherical_function(const SignVector& eps, const TriangularS& s, const HeisenbergElement& h) {
  return rep_scalar(eps, s, h);
}

// --- quadrature ------------------------------------------------------------

namespace {

cplx gaussian_mean(const BargmannVector& f, int nodes) {
  const int nv = f.basis->n_vars();
  if (nv == 0) return f.coeffs(0);
  const GaussRule g = gauss_hermite(nodes);
  // Tensor grid over (Re x_v, Im x_v) for every variable.
  const int dims = 2 * nv;
  std::vector<int> at(static_cast<std::size_t>(dims), 0);
  cplx total = 0.0;
  CVector x(nv);
  for (;;) {
    double w = 1.0;
    for (int v = 0; v < nv; ++v) {
      const auto re = static_cast<std::size_t>(at[static_cast<std::size_t>(2 * v)]);
      const auto im = static_cast<std::size_t>(at[static_cast<std::size_t>(2 * v + 1)]);
      x(v) = cplx(g.nodes[re], g.nodes[im]);
      w *= g.weights[re] * g.weights[im] / std::numbers::pi;
    }
    total += w * f.evaluate(x);
    int d = 0;
    while (d < dims && ++at[static_cast<std::size_t>(d)] == nodes) at[static_cast<std::size_t>(d++)] = 0;
    if (d == dims) break;
  }
  return total;
}

} // namespace

VacuumFunctionalResult vacuum_functional_check(const BargmannVector& f, int nodes) {
  int top = 0;
  for (int pos = 0; pos < f.basis->size(); ++pos)
    if (f.coeffs(pos) != cplx(0.0)) top = std::max(top, f.basis->degree(pos));
  if (2 * nodes - 1 < top)
    throw QuadratureUnstable(std::to_string(nodes) + " nodes cannot integrate degree " + std::to_string(top));
  VacuumFunctionalResult r;
  r.nodes = nodes;
  r.quadrature = gaussian_mean(f, nodes);
  r.refined = gaussian_mean(f, 2 * nodes);
  r.value_at_zero = f.evaluate(CVector::Zero(f.basis->n_vars()));
  return r;
}

// --- commutant -------------------------------------------------------------

CommutantScan commutant_scan(const std::vector<BargmannOperator>& family, double rel_tol) {
  if (family.empty()) throw InvalidInput("commutant scan needs a nonempty family");
  const int half = family.front().basis->max_degree() / 2;
  const int b = family.front().basis->block_size(half);
  const int b2 = b * b;
  CMatrix sys(static_cast<Eigen::Index>(family.size()) * b2, b2);
  const CMatrix eye = CMatrix::Identity(b, b);
  for (std::size_t f = 0; f < family.size(); ++f) {
    same_basis(family.front().basis, family[f].basis);
    const CMatrix a = family[f].block(half);
    // vec(AX − XA) = (I ⊗ A − Aᵀ ⊗ I) vec(X), column-major vec.
    CMatrix k(b2, b2);
    for (int r1 = 0; r1 < b; ++r1)
      for (int c1 = 0; c1 < b; ++c1)
        k.block(r1 * b, c1 * b, b, b) = eye(r1, c1) * a - a(c1, r1) * eye;
    sys.block(static_cast<Eigen::Index>(f) * b2, 0, b2, b2) = k;
  }
  Eigen::BDCSVD<CMatrix> svd(sys);
  RVector sv = svd.singularValues();
  std::sort(sv.data(), sv.data() + sv.size());
  CommutantScan out;
  out.block_size = b;
  const double top = sv.size() ? sv(sv.size() - 1) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= rel_tol * top) ++out.dimension;
  if (top == 0.0) out.dimension = b2;
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(5, sv.size()); ++i)
    out.smallest_singular_values.push_back(sv(i));
  return out;
}

} // namespace upq
