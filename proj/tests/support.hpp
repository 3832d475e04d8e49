#pragma once

#include <random>

#include "gcg/clifford.hpp"
#include "gcg/courant.hpp"
#include "gcg/gc_linear.hpp"
#include "gcg/isotropic.hpp"
#include "gcg/matrix.hpp"
#include "gcg/scalar.hpp"

namespace testing_support {

using namespace gcg;

struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  int uniform(int lo, int hi) { return lo + static_cast<int>(engine() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin(int percent) { return uniform(1, 100) <= percent; }
  Rational rational(int bound = 3) {
    Rational q(uniform(-bound, bound), uniform(1, 2));
    q.canonicalize();
    return q;
  }
  Complex complex(int bound = 3, bool real = false) {
    return real ? Complex(rational(bound)) : Complex(rational(bound), rational(bound));
  }
  std::mt19937_64 engine;
};

inline Poly random_poly(Rng& rng, int nvars, int max_degree, int density = 40, bool real = true) {
  Poly p = Poly(0).with_nvars(nvars);
  std::vector<Monomial> monos{Monomial{}};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Monomial> next;
    for (const auto& m : monos) {
      if (m.degree() != d - 1) continue;
      int last = 0;
      for (int i = 0; i < nvars; ++i) {
        if (m.exp[i]) last = i;
      }
      for (int i = last; i < nvars; ++i) {
        Monomial n = m;
        n.exp[i]++;
        next.push_back(n);
      }
    }
    monos.insert(monos.end(), next.begin(), next.end());
  }
  for (const auto& m : monos) {
    if (rng.coin(density)) p += Poly::monomial(nvars, m, rng.complex(3, real));
  }
  return p;
}

inline CMatrix random_matrix(Rng& rng, int r, int c, int bound = 2, bool real = true) {
  CMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = rng.coin(60) ? rng.complex(bound, real) : Complex(0);
  }
  return m;
}

inline CMatrix random_antisymmetric(Rng& rng, int m, int bound = 2, bool real = true) {
  CMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      a(i, j) = rng.coin(60) ? rng.complex(bound, real) : Complex(0);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

// Unimodular-ish invertible matrix: product of elementary shears and a diagonal.
inline CMatrix random_gl(Rng& rng, int m) {
  CMatrix g = CMatrix::identity(m);
  for (int k = 0; k < 2 * m; ++k) {
    int i = rng.uniform(0, m - 1), j = rng.uniform(0, m - 1);
    if (i == j) continue;
    CMatrix e = CMatrix::identity(m);
    e(i, j) = Complex(rng.uniform(-2, 2));
    g = g * e;
  }
  for (int i = 0; i < m; ++i) {
    if (rng.coin(30)) {
      for (int j = 0; j < m; ++j) g(i, j) *= Complex(-1);
    }
  }
  return g;
}

inline Form<Complex> random_form(Rng& rng, int m, int density = 30, bool real = false) {
  Form<Complex> f(m);
  for (Mask s = 0; s <= full_mask(m); ++s) {
    if (rng.coin(density)) f.add(s, rng.complex(3, real));
  }
  return f;
}

inline Transform random_transform(Rng& rng, int m, bool real = true) {
  switch (rng.uniform(0, 2)) {
    case 0:
      return BTransform{random_antisymmetric(rng, m, 2, real)};
    case 1:
      return BetaTransform{random_antisymmetric(rng, m, 2, real)};
    default:
      return GLTransform{random_gl(rng, m), false};
  }
}

// Random maximal isotropic: V or V* pushed through 1-3 random transforms.
inline MaxIsotropic random_isotropic(Rng& rng, int m, bool real = false) {
  MaxIsotropic l = rng.coin(50) ? tangent_space(m) : cotangent_space(m);
  int steps = rng.uniform(1, 3);
  for (int k = 0; k < steps; ++k) l = transform(l, random_transform(rng, m, real));
  return l;
}

// Standard complex(k) ⊕ symplectic(m - 2k) structure.
inline CMatrix standard_structure(int m, int k) {
  if (k == 0) return j_symplectic(standard_symplectic(m / 2));
  if (2 * k == m) return j_complex(standard_complex(k));
  return direct_sum(j_complex(standard_complex(k)), j_symplectic(standard_symplectic(m / 2 - k)));
}

// Conjugates a standard structure by random transforms. Type-preserving
// kinds (B, GL) only unless allow_beta is set.
inline CMatrix random_structure(Rng& rng, int m, int k, bool allow_beta = false) {
  CMatrix j = standard_structure(m, k);
  int steps = rng.uniform(1, 3);
  for (int s = 0; s < steps; ++s) {
    Transform t = random_transform(rng, m, true);
    if (!allow_beta && std::holds_alternative<BetaTransform>(t)) t = BTransform{random_antisymmetric(rng, m)};
    j = conjugate(j, t);
  }
  return j;
}

inline PSection random_section(Rng& rng, int m, int max_degree, int density = 30) {
  PSection s(m);
  for (int i = 0; i < m; ++i) {
    s.vec[i] = random_poly(rng, m, max_degree, density);
    s.covec[i] = random_poly(rng, m, max_degree, density);
  }
  return s;
}

// Random polynomial form; degree < 0 gives a mixed form.
inline PForm random_pform(Rng& rng, int m, int max_degree, int degree = -1, int density = 30) {
  PForm f(m);
  for (Mask mask = 0; mask <= full_mask(m); ++mask) {
    if (degree >= 0 && popcount(mask) != degree) continue;
    if (rng.coin(50)) f.add(mask, random_poly(rng, m, max_degree, density));
  }
  return f;
}

inline PMatrix random_poly_antisymmetric(Rng& rng, int m, int max_degree, int density = 30) {
  PMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      a(i, j) = random_poly(rng, m, max_degree, density);
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

}  // namespace testing_support
