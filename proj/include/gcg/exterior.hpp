#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gcg/error.hpp"
#include "gcg/scalar.hpp"

namespace gcg {

using Mask = std::uint32_t;

inline constexpr int kMaxDim = 12;

enum class Variance { form, multivector };

inline int popcount(Mask m) { return std::popcount(m); }

// Sign of e^a ∧ e^b for basis monomials with disjoint masks: one factor of
// -1 for every pair (i in a, j in b) with i > j.
inline int wedge_sign(Mask a, Mask b) {
  int swaps = 0;
  for (Mask rest = a; rest != 0; rest &= rest - 1) {
    int i = std::countr_zero(rest);
    swaps += popcount(b & ((Mask{1} << i) - 1));
  }
  return (swaps & 1) ? -1 : 1;
}

// Sign of i_{e_j} on a monomial containing bit j: generators below j pass first.
inline int contraction_sign(Mask a, int j) { return (popcount(a & ((Mask{1} << j) - 1)) & 1) ? -1 : 1; }

inline void check_dim(int dim) {
  if (dim < 0) throw DimensionError("negative dimension");
  if (dim > kMaxDim) {
    throw CapacityError("dimension " + std::to_string(dim) + " exceeds the supported maximum of " +
                        std::to_string(kMaxDim));
  }
}

inline Mask full_mask(int dim) { return dim == 0 ? 0 : ((Mask{1} << dim) - 1); }

// Sparse element of the exterior algebra on V* (forms) or V (multivectors).
// Bit i of a mask is the generator e^{i+1} (resp. e_{i+1}).
template <class C>
class Form {
 public:
  Form() = default;
  explicit Form(int dim, Variance variance = Variance::form) : dim_(dim), variance_(variance) { check_dim(dim); }

  static Form scalar(int dim, const C& c, Variance v = Variance::form) {
    Form f(dim, v);
    f.add(0, c);
    return f;
  }
  // The generator with index i (0-based).
  static Form generator(int dim, int i, Variance v = Variance::form) {
    if (i < 0 || i >= dim) throw DimensionError("generator index out of range");
    Form f(dim, v);
    f.add(Mask{1} << i, C(1));
    return f;
  }
  static Form monomial(int dim, Mask m, const C& c, Variance v = Variance::form) {
    Form f(dim, v);
    f.add(m, c);
    return f;
  }
  // 1-form (or vector) with the given components.
  static Form linear(const std::vector<C>& comps, Variance v = Variance::form) {
    Form f(static_cast<int>(comps.size()), v);
    for (std::size_t i = 0; i < comps.size(); ++i) f.add(Mask{1} << i, comps[i]);
    return f;
  }

  int dim() const { return dim_; }
  Variance variance() const { return variance_; }
  const std::map<Mask, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  C coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add(Mask m, const C& c) {
    if (m > full_mask(dim_)) throw DimensionError("basis monomial outside the ambient dimension");
    if (gcg::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (gcg::is_zero(it->second)) terms_.erase(it);
    }
  }

  Form component(int k) const {
    Form r(dim_, variance_);
    for (const auto& [m, c] : terms_) {
      if (popcount(m) == k) r.terms_.emplace(m, c);
    }
    return r;
  }
  // Degree of the lowest nonzero component, -1 for the zero form.
  int lowest_degree() const {
    int k = -1;
    for (const auto& [m, c] : terms_) {
      if (k < 0 || popcount(m) < k) k = popcount(m);
    }
    return k;
  }
  int highest_degree() const {
    int k = -1;
    for (const auto& [m, c] : terms_) k = std::max(k, popcount(m));
    return k;
  }
  bool is_homogeneous() const { return lowest_degree() == highest_degree(); }

  template <class F>
  Form map_coeffs(F f) const {
    Form r(dim_, variance_);
    for (const auto& [m, c] : terms_) r.add(m, f(c));
    return r;
  }
  Form conj() const {
    return map_coeffs([](const C& c) { return gcg::conj(c); });
  }

  Form& operator+=(const Form& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  Form& operator-=(const Form& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  Form& operator*=(const C& s) {
    if (gcg::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    std::map<Mask, C> next;
    for (const auto& [m, c] : terms_) {
      C v = c * s;
      if (!gcg::is_zero(v)) next.emplace(m, std::move(v));
    }
    terms_ = std::move(next);
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(Form a, const C& s) { return a *= s; }
  friend Form operator*(const C& s, Form a) { return a *= s; }
  Form operator-() const {
    Form r(dim_, variance_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }
  friend bool operator==(const Form& a, const Form& b) {
    return a.dim_ == b.dim_ && a.variance_ == b.variance_ && a.terms_ == b.terms_;
  }

  void check_compatible(const Form& o) const {
    if (dim_ != o.dim_) {
      throw DimensionError("dimension mismatch: " + std::to_string(dim_) + " vs " + std::to_string(o.dim_));
    }
    if (variance_ != o.variance_) throw DimensionError("cannot combine a form with a multivector");
  }

 private:
  int dim_ = 0;
  Variance variance_ = Variance::form;
  std::map<Mask, C> terms_;
};

template <class C>
Form<C> wedge(const Form<C>& a, const Form<C>& b) {
  a.check_compatible(b);
  Form<C> r(a.dim(), a.variance());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      C v = ca * cb;
      if (wedge_sign(ma, mb) < 0) v = -v;
      r.add(ma | mb, v);
    }
  }
  return r;
}

template <class C>
Form<C> wedge_all(const std::vector<Form<C>>& factors, int dim, Variance v = Variance::form) {
  Form<C> r = Form<C>::scalar(dim, C(1), v);
  for (const auto& f : factors) r = wedge(r, f);
  return r;
}

// Contraction with the dual generator of index j: i_{e_j} on forms,
// i_{e^j} on multivectors.
template <class C>
Form<C> contract_basis(int j, const Form<C>& phi) {
  Form<C> r(phi.dim(), phi.variance());
  const Mask bit = Mask{1} << j;
  for (const auto& [m, c] : phi.terms()) {
    if (!(m & bit)) continue;
    r.add(m & ~bit, contraction_sign(m, j) < 0 ? C(-c) : c);
  }
  return r;
}

// i_X phi for X given by components in the dual space.
template <class C>
Form<C> contract(const std::vector<C>& x, const Form<C>& phi) {
  if (static_cast<int>(x.size()) != phi.dim()) throw DimensionError("contraction dimension mismatch");
  Form<C> r(phi.dim(), phi.variance());
  for (int j = 0; j < phi.dim(); ++j) {
    if (gcg::is_zero(x[j])) continue;
    r += contract_basis(j, phi) * x[j];
  }
  return r;
}

// Main antiautomorphism: degree-k component times (-1)^{k(k-1)/2}.
template <class C>
Form<C> reversal(const Form<C>& phi) {
  Form<C> r(phi.dim(), phi.variance());
  for (const auto& [m, c] : phi.terms()) {
    int k = popcount(m);
    r.add(m, ((k * (k - 1) / 2) & 1) ? C(-c) : c);
  }
  return r;
}

// Exponential in the exterior algebra of an even element with no scalar
// part: 1 + a + a^2/2 + ...
template <class C>
Form<C> wedge_exp(const Form<C>& a) {
  if (!gcg::is_zero(a.coeff(0))) throw DomainError("wedge_exp needs a nilpotent argument");
  Form<C> result = Form<C>::scalar(a.dim(), C(1), a.variance());
  Form<C> term = result;
  for (int k = 1; k <= a.dim(); ++k) {
    term = wedge(term, a) * C(Complex(Rational(1, k)));
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

// 2-form (or bivector) from an antisymmetric component matrix M with
// phi = sum_{i<j} M[i][j] e^{ij}.
template <class C, class Matrix>
Form<C> two_form_from_matrix(const Matrix& m, Variance v = Variance::form) {
  const int n = m.rows();
  Form<C> r(n, v);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) r.add((Mask{1} << i) | (Mask{1} << j), m(i, j));
  }
  return r;
}

std::string mask_str(Mask m);

}  // namespace gcg
