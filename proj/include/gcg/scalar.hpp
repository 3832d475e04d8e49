#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace gcg {

using Rational = mpq_class;

std::string to_string(const Rational& q);

// Exact square root of a non-negative rational, if it is a perfect square.
bool rational_sqrt(const Rational& q, Rational& out);

// Gaussian rational a + bi.
class Complex {
 public:
  Complex() = default;
  Complex(long v) : re_(v) {}  // NOLINT: integer literals are scalars
  Complex(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}

  static Complex i() { return Complex(0, 1); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Complex conj() const { return Complex(re_, -im_); }
  Rational norm() const { return re_ * re_ + im_ * im_; }
  Complex inverse() const;

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o) { return *this *= o.inverse(); }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  Complex operator-() const { return Complex(-re_, -im_); }

  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::string str() const;

 private:
  Rational re_ = 0;
  Rational im_ = 0;
};

// Square root inside Q(i). Returns false when none exists.
bool complex_sqrt(const Complex& z, Complex& out);

inline constexpr int kMaxVars = 12;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> exp{};

  int degree() const {
    int d = 0;
    for (auto e : exp) d += e;
    return d;
  }
  auto operator<=>(const Monomial&) const = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

// Sparse polynomial in real chart variables x_0..x_{n-1} with Gaussian
// rational coefficients. A polynomial with nvars() == 0 is a bare constant
// and combines with any chart; two polynomials over different non-empty
// variable sets cannot be combined.
class Poly {
 public:
  Poly() = default;
  Poly(long c) : Poly(Complex(c)) {}  // NOLINT
  Poly(const Complex& c);             // NOLINT
  Poly(const Rational& c) : Poly(Complex(c)) {}  // NOLINT

  static Poly var(int nvars, int index);
  static Poly monomial(int nvars, const Monomial& m, const Complex& c);

  int nvars() const { return nvars_; }
  Poly with_nvars(int n) const;
  const std::map<Monomial, Complex>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Complex constant_value() const;  // throws unless constant
  Complex coeff(const Monomial& m) const;
  int degree() const;  // -1 for zero

  Poly derivative(int var) const;
  Complex eval(std::span<const Complex> point) const;
  Poly substitute(std::span<const Poly> images) const;
  Poly conj() const;
  Poly real_part() const;
  Poly imag_part() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  // Uses names[i] for x_i; defaults to x1, x2, ...
  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  void add_term(const Monomial& m, const Complex& c);
  static int merge_nvars(int a, int b);

  int nvars_ = 0;
  std::map<Monomial, Complex> terms_;
};

Poly pow(const Poly& p, int e);

// Scalar grammar: integers, rationals "3/2", Gaussian literals "1/3i" or
// "1/2+1/3i", chart variables, + - * ^, parentheses and division by a
// nonzero constant.
Poly parse_poly(const std::string& text, const std::vector<std::string>& names);
Complex parse_complex(const std::string& text);

inline bool is_zero(const Complex& c) { return c.is_zero(); }
inline bool is_zero(const Poly& p) { return p.is_zero(); }
inline Complex conj(const Complex& c) { return c.conj(); }
inline Poly conj(const Poly& p) { return p.conj(); }

}  // namespace gcg
