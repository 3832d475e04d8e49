#pragma once

#include <variant>
#include <vector>

#include "gcg/exterior.hpp"
#include "gcg/matrix.hpp"

namespace gcg {

// X + xi in V ⊕ V*.
template <class C>
struct GenVector {
  std::vector<C> vec;
  std::vector<C> covec;

  GenVector() = default;
  explicit GenVector(int dim) : vec(dim, C(0)), covec(dim, C(0)) {}
  GenVector(std::vector<C> x, std::vector<C> xi) : vec(std::move(x)), covec(std::move(xi)) {
    if (vec.size() != covec.size()) throw DimensionError("vector and covector parts differ in size");
  }
  static GenVector basis_vector(int dim, int i) {
    GenVector g(dim);
    g.vec[i] = C(1);
    return g;
  }
  static GenVector basis_covector(int dim, int i) {
    GenVector g(dim);
    g.covec[i] = C(1);
    return g;
  }
  // Flattened coordinates (X; xi).
  static GenVector from_flat(const std::vector<C>& v) {
    const std::size_t m = v.size() / 2;
    return GenVector(std::vector<C>(v.begin(), v.begin() + m), std::vector<C>(v.begin() + m, v.end()));
  }

  int dim() const { return static_cast<int>(vec.size()); }
  std::vector<C> flat() const {
    std::vector<C> f = vec;
    f.insert(f.end(), covec.begin(), covec.end());
    return f;
  }
  bool is_zero() const {
    for (const auto& c : vec) {
      if (!gcg::is_zero(c)) return false;
    }
    for (const auto& c : covec) {
      if (!gcg::is_zero(c)) return false;
    }
    return true;
  }
  GenVector conj() const {
    GenVector r = *this;
    for (auto& c : r.vec) c = gcg::conj(c);
    for (auto& c : r.covec) c = gcg::conj(c);
    return r;
  }
  // (X + xi)^T = X - xi.
  GenVector transpose() const {
    GenVector r = *this;
    for (auto& c : r.covec) c = -c;
    return r;
  }

  GenVector& operator+=(const GenVector& o) {
    check(o);
    for (int i = 0; i < dim(); ++i) {
      vec[i] += o.vec[i];
      covec[i] += o.covec[i];
    }
    return *this;
  }
  GenVector& operator-=(const GenVector& o) {
    check(o);
    for (int i = 0; i < dim(); ++i) {
      vec[i] -= o.vec[i];
      covec[i] -= o.covec[i];
    }
    return *this;
  }
  friend GenVector operator+(GenVector a, const GenVector& b) { return a += b; }
  friend GenVector operator-(GenVector a, const GenVector& b) { return a -= b; }
  friend GenVector operator*(const C& s, GenVector a) {
    for (auto& c : a.vec) c = s * c;
    for (auto& c : a.covec) c = s * c;
    return a;
  }
  GenVector operator-() const { return C(-1) * *this; }
  friend bool operator==(const GenVector& a, const GenVector& b) { return a.vec == b.vec && a.covec == b.covec; }

  void check(const GenVector& o) const {
    if (dim() != o.dim()) throw DimensionError("generalized vectors of different dimension");
  }
};

template <class C>
C dot(const std::vector<C>& a, const std::vector<C>& b) {
  if (a.size() != b.size()) throw DimensionError("pairing of vectors of different dimension");
  C s(0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!gcg::is_zero(a[i]) && !gcg::is_zero(b[i])) s += a[i] * b[i];
  }
  return s;
}

// xi(Y) + eta(X), i.e. twice the inner product.
template <class C>
C pairing(const GenVector<C>& a, const GenVector<C>& b) {
  a.check(b);
  return dot(a.covec, b.vec) + dot(b.covec, a.vec);
}

// <X+xi, Y+eta> = (xi(Y) + eta(X)) / 2.
template <class C>
C inner(const GenVector<C>& a, const GenVector<C>& b) {
  return pairing(a, b) * C(Complex(Rational(1, 2)));
}

// (X + xi)·phi = i_X phi + xi ∧ phi.
template <class C>
Form<C> clifford_act(const GenVector<C>& w, const Form<C>& phi) {
  if (w.dim() != phi.dim()) throw DimensionError("Clifford action dimension mismatch");
  if (phi.variance() != Variance::form) throw DimensionError("Clifford action needs a form");
  return contract(w.vec, phi) + wedge(Form<C>::linear(w.covec), phi);
}

// [s^T ∧ t]_top, returned as a form of top degree.
template <class C>
Form<C> mukai_pair(const Form<C>& s, const Form<C>& t) {
  s.check_compatible(t);
  return wedge(reversal(s), t).component(s.dim());
}

template <class C>
C mukai_scalar(const Form<C>& s, const Form<C>& t) {
  return mukai_pair(s, t).coeff(full_mask(s.dim()));
}

// Element of so(V ⊕ V*) split as (A, B, beta). B and beta are component
// matrices: B(e_i, e_j) = B[i][j], beta(e^i, e^j) = beta[i][j].
// A acts on V by X^j -> sum_i A[j][i] X^i.
template <class C>
struct SoElement {
  Matrix<C> A;
  Matrix<C> B;
  Matrix<C> beta;

  static SoElement zero(int m) { return {Matrix<C>(m, m), Matrix<C>(m, m), Matrix<C>(m, m)}; }
  static SoElement from_A(const Matrix<C>& a) {
    SoElement x = zero(a.rows());
    x.A = a;
    return x;
  }
  static SoElement from_B(const Matrix<C>& b) {
    SoElement x = zero(b.rows());
    x.B = b;
    x.validate();
    return x;
  }
  static SoElement from_beta(const Matrix<C>& b) {
    SoElement x = zero(b.rows());
    x.beta = b;
    x.validate();
    return x;
  }

  int dim() const { return A.rows(); }
  void validate() const {
    const int m = A.rows();
    if (A.cols() != m || B.rows() != m || B.cols() != m || beta.rows() != m || beta.cols() != m) {
      throw DimensionError("so element blocks must all be m x m");
    }
    if (!B.is_antisymmetric()) throw ValidationError("B block is not antisymmetric");
    if (!beta.is_antisymmetric()) throw ValidationError("beta block is not antisymmetric");
  }
  // Matrix acting on flattened (X; xi): [[A, beta^T], [B^T, -A^T]].
  Matrix<C> matrix() const {
    const int m = dim();
    Matrix<C> t(2 * m, 2 * m);
    t.set_block(0, 0, A);
    t.set_block(0, m, beta.transpose());
    t.set_block(m, 0, B.transpose());
    t.set_block(m, m, -A.transpose());
    return t;
  }
  static SoElement from_matrix(const Matrix<C>& t) {
    if (!t.is_square() || t.rows() % 2) throw DimensionError("so matrix must be 2m x 2m");
    const int m = t.rows() / 2;
    SoElement x{t.block(0, 0, m, m), t.block(m, 0, m, m).transpose(), t.block(0, m, m, m).transpose()};
    x.validate();
    if (!(t.block(m, m, m, m) == -x.A.transpose())) throw ValidationError("matrix is not in so(V+V*): D != -A^T");
    return x;
  }
};

// i_xi beta as a vector: (i_xi beta)^j = sum_i xi_i beta[i][j]; likewise i_X B.
template <class C>
std::vector<C> contract_two(const Matrix<C>& m, const std::vector<C>& v) {
  return m.transpose() * v;
}

// d rho_x applied to a generalized vector.
template <class C>
GenVector<C> so_apply(const SoElement<C>& x, const GenVector<C>& v) {
  return GenVector<C>::from_flat(x.matrix() * v.flat());
}

// A* on forms: the derivation extending xi -> xi ∘ A.
template <class C>
Form<C> derivation_pullback(const Matrix<C>& a, const Form<C>& phi) {
  const int m = phi.dim();
  Form<C> r(m, phi.variance());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (gcg::is_zero(a(j, i))) continue;
      r += wedge(Form<C>::generator(m, i), contract_basis(j, phi)) * a(j, i);
    }
  }
  return r;
}

template <class C>
C trace(const Matrix<C>& a) {
  C t(0);
  for (int i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// i_beta phi = 1/2 beta^{ij} i_{e_j} i_{e_i} phi.
template <class C>
Form<C> bivector_contract(const Matrix<C>& beta, const Form<C>& phi) {
  Form<C> r(phi.dim(), phi.variance());
  for (int i = 0; i < beta.rows(); ++i) {
    for (int j = i + 1; j < beta.cols(); ++j) {
      if (gcg::is_zero(beta(i, j))) continue;
      r += contract_basis(j, contract_basis(i, phi)) * beta(i, j);
    }
  }
  return r;
}

// Infinitesimal spin action: -B∧phi + i_beta phi - A*phi + Tr(A)/2 phi.
template <class C>
Form<C> spin_act(const SoElement<C>& x, const Form<C>& phi) {
  const int m = phi.dim();
  if (x.dim() != m) throw DimensionError("spin action dimension mismatch");
  Form<C> r = -wedge(two_form_from_matrix<C>(x.B), phi);
  r += bivector_contract(x.beta, phi);
  r -= derivation_pullback(x.A, phi);
  r += phi * (trace(x.A) * C(Complex(Rational(1, 2))));
  return r;
}

// e^{i_beta} phi = phi + i_beta phi + (i_beta)^2 phi / 2 + ...
template <class C>
Form<C> beta_exp_act(const Matrix<C>& beta, const Form<C>& phi) {
  Form<C> result = phi;
  Form<C> term = phi;
  for (int k = 1; k <= phi.dim(); ++k) {
    term = bivector_contract(beta, term) * C(Complex(Rational(1, k)));
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

// e^{-B} ∧ phi.
template <class C>
Form<C> b_exp_act(const Matrix<C>& b, const Form<C>& phi) {
  return wedge(wedge_exp(-two_form_from_matrix<C>(b)), phi);
}

// Algebra map on forms induced by e^i -> sum_a T[a][i] e^a.
template <class C>
Form<C> form_map(const Matrix<C>& t, const Form<C>& phi) {
  const int m = phi.dim();
  std::vector<Form<C>> images;
  for (int i = 0; i < m; ++i) images.push_back(Form<C>::linear(t.col(i)));
  Form<C> r(m, phi.variance());
  for (const auto& [mask, c] : phi.terms()) {
    Form<C> mono = Form<C>::scalar(m, c);
    for (int i = 0; i < m && !mono.is_zero(); ++i) {
      if (mask & (Mask{1} << i)) mono = wedge(mono, images[i]);
    }
    r += mono;
  }
  return r;
}

// Group elements of O(V ⊕ V*) used as transforms.
struct BTransform {
  Matrix<Complex> B;  // X + xi -> X + xi + i_X B
};
struct BetaTransform {
  Matrix<Complex> beta;  // X + xi -> X + i_xi beta + xi
};
struct GLTransform {
  Matrix<Complex> g;     // X -> gX, xi -> xi ∘ g^{-1}
  bool density = true;   // spinors pick up sqrt(det g)
};
using Transform = std::variant<BTransform, BetaTransform, GLTransform>;

Matrix<Complex> transform_matrix(const Transform& t);
GenVector<Complex> apply_transform(const Transform& t, const GenVector<Complex>& v);
// Spinorial lift of the transform.
Form<Complex> spin_lift(const Transform& t, const Form<Complex>& phi);
Transform inverse(const Transform& t);
// Exponential of an so element with exactly one nonzero block. For the A
// block the exponential must be a finite sum (nilpotent A).
Transform exp_single_block(const SoElement<Complex>& x, bool density = true);
Form<Complex> exp_spin_act(const SoElement<Complex>& x, const Form<Complex>& phi, bool density = true);

// Components of a 2-form / bivector as an antisymmetric matrix.
template <class C>
Matrix<C> two_form_matrix(const Form<C>& f) {
  const int m = f.dim();
  Matrix<C> r(m, m);
  for (const auto& [mask, c] : f.terms()) {
    if (popcount(mask) != 2) throw DimensionError("expected a pure 2-form or bivector");
    int i = std::countr_zero(mask);
    int j = 31 - std::countl_zero(mask);
    r(i, j) = c;
    r(j, i) = -c;
  }
  return r;
}

}  // namespace gcg
