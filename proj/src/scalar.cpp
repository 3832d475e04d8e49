#include "gcg/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "gcg/error.hpp"

namespace gcg {

std::string to_string(const Rational& q) { return q.get_str(); }

bool rational_sqrt(const Rational& q, Rational& out) {
  if (sgn(q) < 0) return false;
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  out = Rational(rn, rd);
  out.canonicalize();
  return true;
}

Complex Complex::inverse() const {
  if (is_zero()) throw DomainError("division by zero");
  Rational n = norm();
  return Complex(re_ / n, -im_ / n);
}

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational m = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(m);
  return *this;
}

std::string Complex::str() const {
  if (sgn(im_) == 0) return to_string(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "i";
  } else if (im_ == -1) {
    imag = "-i";
  } else {
    imag = to_string(im_) + "i";
  }
  if (sgn(re_) == 0) return imag;
  return to_string(re_) + (sgn(im_) > 0 ? "+" : "") + imag;
}

bool complex_sqrt(const Complex& z, Complex& out) {
  if (z.is_zero()) {
    out = Complex(0);
    return true;
  }
  // (x+iy)^2 = a+bi: x^2 = (a+|z|)/2, y^2 = (|z|-a)/2, sign(xy) = sign(b).
  Rational modulus;
  if (!rational_sqrt(z.norm(), modulus)) return false;
  Rational x, y;
  if (!rational_sqrt((z.re() + modulus) / 2, x)) return false;
  if (!rational_sqrt((modulus - z.re()) / 2, y)) return false;
  if (sgn(z.im()) < 0) y = -y;
  out = Complex(x, y);
  return out * out == z;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (int i = 0; i < kMaxVars; ++i) r.exp[i] = static_cast<std::uint16_t>(a.exp[i] + b.exp[i]);
  return r;
}

Poly::Poly(const Complex& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

Poly Poly::var(int nvars, int index) {
  if (nvars > kMaxVars) throw CapacityError("at most " + std::to_string(kMaxVars) + " chart variables");
  if (index < 0 || index >= nvars) throw DimensionError("variable index out of range");
  Monomial m;
  m.exp[index] = 1;
  return monomial(nvars, m, Complex(1));
}

Poly Poly::monomial(int nvars, const Monomial& m, const Complex& c) {
  Poly p;
  p.nvars_ = nvars;
  p.add_term(m, c);
  return p;
}

Poly Poly::with_nvars(int n) const {
  if (n > kMaxVars) throw CapacityError("at most " + std::to_string(kMaxVars) + " chart variables");
  for (const auto& [m, c] : terms_) {
    for (int i = n; i < kMaxVars; ++i) {
      if (m.exp[i] != 0) throw DimensionError("polynomial uses a variable outside the chart");
    }
  }
  Poly p = *this;
  p.nvars_ = n;
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
}

Complex Poly::constant_value() const {
  if (!is_constant()) throw DomainError("polynomial is not constant: " + str());
  return terms_.empty() ? Complex(0) : terms_.begin()->second;
}

Complex Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex(0) : it->second;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

void Poly::add_term(const Monomial& m, const Complex& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int Poly::merge_nvars(int a, int b) {
  if (a == 0) return b;
  if (b == 0 || a == b) return a;
  throw DimensionError("polynomials over different variable sets (" + std::to_string(a) + " vs " +
                       std::to_string(b) + " variables)");
}

Poly Poly::derivative(int var) const {
  if (var < 0 || var >= kMaxVars) throw DimensionError("variable index out of range");
  Poly r;
  r.nvars_ = nvars_;
  for (const auto& [m, c] : terms_) {
    if (m.exp[var] == 0) continue;
    Monomial d = m;
    d.exp[var] -= 1;
    r.add_term(d, c * Complex(static_cast<long>(m.exp[var])));
  }
  return r;
}

Complex Poly::eval(std::span<const Complex> point) const {
  if (nvars_ != 0 && static_cast<int>(point.size()) != nvars_) {
    throw DimensionError("evaluation point has " + std::to_string(point.size()) + " coordinates, chart has " +
                         std::to_string(nvars_));
  }
  Complex sum;
  for (const auto& [m, c] : terms_) {
    Complex t = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int e = 0; e < m.exp[i]; ++e) t *= point[i];
    }
    sum += t;
  }
  return sum;
}

Poly Poly::substitute(std::span<const Poly> images) const {
  if (nvars_ != 0 && static_cast<int>(images.size()) != nvars_) {
    throw DimensionError("substitution needs one image per chart variable");
  }
  // Cache powers of each image as they are needed.
  std::vector<std::vector<Poly>> powers(images.size());
  auto power = [&](int v, int e) -> const Poly& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Poly(1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * images[v]);
    return cache[e];
  };
  Poly r;
  for (const auto& img : images) r.nvars_ = merge_nvars(r.nvars_, img.nvars_);
  for (const auto& [m, c] : terms_) {
    Poly t(c);
    for (int i = 0; i < nvars_; ++i) {
      if (m.exp[i] != 0) t = t * power(i, m.exp[i]);
    }
    r += t;
  }
  return r;
}

Poly Poly::conj() const {
  Poly r;
  r.nvars_ = nvars_;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c.conj());
  return r;
}

Poly Poly::real_part() const {
  Poly r;
  r.nvars_ = nvars_;
  for (const auto& [m, c] : terms_) r.add_term(m, Complex(c.re()));
  return r;
}

Poly Poly::imag_part() const {
  Poly r;
  r.nvars_ = nvars_;
  for (const auto& [m, c] : terms_) r.add_term(m, Complex(c.im()));
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  nvars_ = merge_nvars(nvars_, o.nvars_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  nvars_ = merge_nvars(nvars_, o.nvars_);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  r.nvars_ = Poly::merge_nvars(a.nvars_, b.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  }
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly Poly::operator-() const {
  Poly r;
  r.nvars_ = nvars_;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Poly pow(const Poly& p, int e) {
  if (e < 0) throw DomainError("negative exponent");
  Poly r(1);
  for (int k = 0; k < e; ++k) r = r * p;
  return r;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  auto name = [&](int i) { return i < static_cast<int>(names.size()) ? names[i] : "x" + std::to_string(i + 1); };
  std::string out;
  // Highest total degree first, then reverse lexicographic.
  std::vector<std::pair<Monomial, Complex>> ordered(terms_.rbegin(), terms_.rend());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first.degree() > b.first.degree(); });
  for (const auto& [m, c] : ordered) {
    std::string vars;
    for (int i = 0; i < kMaxVars; ++i) {
      if (m.exp[i] == 0) continue;
      if (!vars.empty()) vars += "*";
      vars += name(i);
      if (m.exp[i] > 1) vars += "^" + std::to_string(m.exp[i]);
    }
    std::string coef;
    bool negative = false;
    if (vars.empty()) {
      if (c.is_real()) {
        negative = sgn(c.re()) < 0;
        coef = to_string(negative ? Rational(-c.re()) : c.re());
      } else if (sgn(c.re()) == 0) {
        negative = sgn(c.im()) < 0;
        coef = Complex(0, negative ? Rational(-c.im()) : c.im()).str();
      } else {
        coef = "(" + c.str() + ")";
      }
    } else if (c == Complex(1)) {
      coef.clear();
    } else if (c == Complex(-1)) {
      negative = true;
    } else if (c.is_real()) {
      negative = sgn(c.re()) < 0;
      coef = to_string(negative ? Rational(-c.re()) : c.re()) + "*";
    } else if (sgn(c.re()) == 0) {
      negative = sgn(c.im()) < 0;
      Rational a = negative ? Rational(-c.im()) : c.im();
      coef = (a == 1 ? std::string("i") : to_string(a) + "i") + "*";
    } else {
      coef = "(" + c.str() + ")*";
    }
    if (out.empty()) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    out += coef + vars;
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& names) : s_(text), names_(names) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return names_.empty() ? p : p.with_nvars(static_cast<int>(names_.size()));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " in scalar \"" + s_ + "\"", "column " + std::to_string(pos_ + 1));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    Poly r;
    bool first = true;
    for (;;) {
      skip();
      bool neg = false;
      if (eat('-')) {
        neg = true;
      } else if (!eat('+') && !first) {
        break;
      }
      Poly t = term();
      r = neg ? r - t : r + t;
      first = false;
    }
    return r;
  }

  Poly term() {
    Poly r = power();
    for (;;) {
      if (eat('*')) {
        r = r * power();
      } else if (eat('/')) {
        Poly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        r = r * Poly(d.constant_value().inverse());
      } else {
        return r;
      }
    }
  }

  Poly power() {
    Poly b = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      int e = std::stoi(s_.substr(start, pos_ - start));
      b = pow(b, e);
    }
    return b;
  }

  bool ident_char(char c) const { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (ident_char(c)) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      for (std::size_t k = 0; k < names_.size(); ++k) {
        if (names_[k] == id) return Poly::var(static_cast<int>(names_.size()), static_cast<int>(k));
      }
      if (id == "i") return Poly(Complex::i());
      pos_ = start;
      fail("unknown variable '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  // digits ['/' digits] ['i'], read as one literal so that "1/3i" is i/3.
  Poly number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    Rational q(mpz_class(s_.substr(start, pos_ - start)));
    if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      std::size_t ds = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class den(s_.substr(ds, pos_ - ds));
      if (den == 0) fail("zero denominator");
      q = Rational(q.get_num(), den);
      q.canonicalize();
    }
    if (pos_ < s_.size() && s_[pos_] == 'i' && (pos_ + 1 == s_.size() || !ident_char(s_[pos_ + 1]))) {
      ++pos_;
      return Poly(Complex(0, q));
    }
    return Poly(Complex(q));
  }

  const std::string& s_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) > kMaxVars) throw CapacityError("at most 12 chart variables");
  return Parser(text, names).parse();
}

Complex parse_complex(const std::string& text) {
  static const std::vector<std::string> none;
  Poly p = Parser(text, none).parse();
  if (!p.is_constant()) throw ParseError("expected a constant", text);
  return p.constant_value();
}

}  // namespace gcg
