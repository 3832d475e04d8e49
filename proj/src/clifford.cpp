#include "gcg/clifford.hpp"

#include "gcg/linalg.hpp"

namespace gcg {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_square(const CMatrix& m, const char* what) {
  if (!m.is_square()) throw DimensionError(std::string(what) + " must be square");
}

}  // namespace

CMatrix transform_matrix(const Transform& t) {
  return std::visit(Overloaded{
                        [](const BTransform& b) {
                          check_square(b.B, "B");
                          const int m = b.B.rows();
                          CMatrix r = CMatrix::identity(2 * m);
                          r.set_block(m, 0, b.B.transpose());
                          return r;
                        },
                        [](const BetaTransform& b) {
                          check_square(b.beta, "beta");
                          const int m = b.beta.rows();
                          CMatrix r = CMatrix::identity(2 * m);
                          r.set_block(0, m, b.beta.transpose());
                          return r;
                        },
                        [](const GLTransform& g) {
                          check_square(g.g, "g");
                          const int m = g.g.rows();
                          CMatrix r(2 * m, 2 * m);
                          r.set_block(0, 0, g.g);
                          r.set_block(m, m, inverse(g.g).transpose());
                          return r;
                        },
                    },
                    t);
}

GenVector<Complex> apply_transform(const Transform& t, const GenVector<Complex>& v) {
  CMatrix m = transform_matrix(t);
  if (m.rows() != 2 * v.dim()) throw DimensionError("transform dimension mismatch");
  return GenVector<Complex>::from_flat(m * v.flat());
}

Form<Complex> spin_lift(const Transform& t, const Form<Complex>& phi) {
  return std::visit(Overloaded{
                        [&](const BTransform& b) {
                          if (!b.B.is_antisymmetric()) throw ValidationError("B is not antisymmetric");
                          return b_exp_act(b.B, phi);
                        },
                        [&](const BetaTransform& b) {
                          if (!b.beta.is_antisymmetric()) throw ValidationError("beta is not antisymmetric");
                          return beta_exp_act(b.beta, phi);
                        },
                        [&](const GLTransform& g) {
                          check_square(g.g, "g");
                          CMatrix ginv = inverse(g.g);
                          Form<Complex> r = form_map(ginv.transpose(), phi);
                          if (!g.density) return r;
                          Complex d = det(g.g);
                          Complex root;
                          if (!complex_sqrt(d, root)) {
                            throw DomainError("no exact square root of det g = " + d.str());
                          }
                          return r * root;
                        },
                    },
                    t);
}

Transform inverse(const Transform& t) {
  return std::visit(Overloaded{
                        [](const BTransform& b) -> Transform { return BTransform{-b.B}; },
                        [](const BetaTransform& b) -> Transform { return BetaTransform{-b.beta}; },
                        [](const GLTransform& g) -> Transform { return GLTransform{inverse(g.g), g.density}; },
                    },
                    t);
}

Transform exp_single_block(const SoElement<Complex>& x, bool density) {
  x.validate();
  const int blocks = (x.A.is_zero() ? 0 : 1) + (x.B.is_zero() ? 0 : 1) + (x.beta.is_zero() ? 0 : 1);
  if (blocks > 1) throw ValidationError("exponential needs exactly one nonzero block");
  if (!x.B.is_zero()) return BTransform{x.B};
  if (!x.beta.is_zero()) return BetaTransform{x.beta};
  const int m = x.dim();
  // exp(A) as a finite sum; only nilpotent A has an exact exponential.
  CMatrix sum = CMatrix::identity(m);
  CMatrix term = CMatrix::identity(m);
  for (int k = 1; k <= m; ++k) {
    term = Complex(Rational(1, k)) * (term * x.A);
    if (term.is_zero()) return GLTransform{sum, density};
    sum += term;
  }
  throw DomainError("exponential of a non-nilpotent A block is not exact; pass g instead");
}

Form<Complex> exp_spin_act(const SoElement<Complex>& x, const Form<Complex>& phi, bool density) {
  return spin_lift(exp_single_block(x, density), phi);
}

std::string mask_str(Mask m) {
  std::string s;
  for (int i = 0; i < kMaxDim; ++i) {
    if (m & (Mask{1} << i)) {
      if (!s.empty()) s += ",";
      s += std::to_string(i + 1);
    }
  }
  return "{" + s + "}";
}

}  // namespace gcg
