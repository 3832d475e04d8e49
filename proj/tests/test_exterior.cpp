#include <doctest.h>

#include <algorithm>

#include "gcg/clifford.hpp"
#include "gcg/linalg.hpp"
#include "support.hpp"

using namespace gcg;
using F = Form<Complex>;
using GV = GenVector<Complex>;

namespace {

// Parity of the permutation sorting the concatenated index lists, by
// counting transpositions in a bubble sort.
int permutation_sign(std::vector<int> seq) {
  int swaps = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = 0; j + 1 < seq.size() - i; ++j) {
      if (seq[j] > seq[j + 1]) {
        std::swap(seq[j], seq[j + 1]);
        ++swaps;
      }
    }
  }
  return swaps % 2 ? -1 : 1;
}

std::vector<int> indices(Mask m) {
  std::vector<int> v;
  for (int i = 0; i < 32; ++i) {
    if (m & (Mask{1} << i)) v.push_back(i);
  }
  return v;
}

F e(int m, std::initializer_list<int> idx, Complex c = Complex(1)) {
  Mask mask = 0;
  for (int i : idx) mask |= Mask{1} << (i - 1);
  return F::monomial(m, mask, c);
}

}  // namespace

TEST_CASE("wedge sign matches a transposition count") {
  for (int m = 1; m <= 6; ++m) {
    for (Mask a = 0; a <= full_mask(m); ++a) {
      for (Mask b = 0; b <= full_mask(m); ++b) {
        F w = wedge(F::monomial(m, a, Complex(1)), F::monomial(m, b, Complex(1)));
        if (a & b) {
          CHECK(w.is_zero());
          continue;
        }
        std::vector<int> seq = indices(a);
        auto ib = indices(b);
        seq.insert(seq.end(), ib.begin(), ib.end());
        CHECK(w == F::monomial(m, a | b, Complex(permutation_sign(seq))));
      }
    }
  }
}

TEST_CASE("wedge examples and variance checks") {
  CHECK(wedge(e(2, {1}), e(2, {2})) == e(2, {1, 2}));
  CHECK(wedge(e(2, {2}), e(2, {1})) == -e(2, {1, 2}));
  F one = F::scalar(4, Complex(1));
  CHECK(wedge(one + e(4, {1, 2}), one + e(4, {3, 4})) == one + e(4, {1, 2}) + e(4, {3, 4}) + e(4, {1, 2, 3, 4}));
  F mv = F::generator(2, 0, Variance::multivector);
  CHECK_THROWS_AS(wedge(e(2, {1}), mv), DimensionError);
  CHECK_THROWS_AS(F(13), CapacityError);
}

TEST_CASE("wedge is associative and graded commutative") {
  testing_support::Rng rng(3);
  for (int k = 0; k < 30; ++k) {
    F a = testing_support::random_form(rng, 5), b = testing_support::random_form(rng, 5),
      c = testing_support::random_form(rng, 5);
    CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
    for (int p = 0; p <= 5; ++p) {
      for (int q = 0; q <= 5; ++q) {
        F ap = a.component(p), bq = b.component(q);
        CHECK(wedge(ap, bq) == wedge(bq, ap) * Complex((p * q) % 2 ? -1 : 1));
      }
    }
  }
}

TEST_CASE("Clifford action examples") {
  CHECK(clifford_act(GV::basis_vector(2, 0), e(2, {1, 2})) == e(2, {2}));
  GV v = GV::basis_vector(2, 0) + GV::basis_covector(2, 0);
  CHECK(inner(v, v) == Complex(1));
  CHECK(clifford_act(v, clifford_act(v, e(2, {2}))) == e(2, {2}));
  CHECK(clifford_act(GV::basis_covector(3, 2), e(3, {1, 2})) == e(3, {1, 2, 3}));
}

TEST_CASE("Clifford relation v.(v.phi) = <v,v> phi") {
  testing_support::Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    int m = rng.uniform(1, 6);
    GV v(m);
    for (int i = 0; i < m; ++i) {
      v.vec[i] = rng.complex();
      v.covec[i] = rng.complex();
    }
    F phi = testing_support::random_form(rng, m);
    CHECK(clifford_act(v, clifford_act(v, phi)) == phi * inner(v, v));
  }
}

TEST_CASE("transpose sign rule for sections") {
  testing_support::Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    int m = 4;
    GV v(m);
    for (int i = 0; i < m; ++i) {
      v.vec[i] = rng.complex();
      v.covec[i] = rng.complex();
    }
    for (int p = 0; p <= m; ++p) {
      F phi = testing_support::random_form(rng, m).component(p);
      Complex s((p + 1) % 2 ? -1 : 1);
      CHECK(reversal(clifford_act(v, phi)) == clifford_act(v.transpose(), reversal(phi)) * s);
    }
  }
}

TEST_CASE("Mukai pairing examples") {
  F one = F::scalar(4, Complex(1));
  CHECK(mukai_pair(one, e(4, {1, 2, 3, 4})) == e(4, {1, 2, 3, 4}));
  CHECK(mukai_pair(e(4, {1, 2}), e(4, {3, 4})) == -e(4, {1, 2, 3, 4}));
}

TEST_CASE("m=2 symplectic pairing constant, brute force") {
  // Oracle: expand (1+iw)^T ∧ (1-iw) by hand-coded reversal and product
  // tables on the four basis monomials of dimension 2.
  const Complex i = Complex::i();
  // coefficients on {1, e1, e2, e12}
  std::array<Complex, 4> s{Complex(1), 0, 0, i};
  std::array<Complex, 4> t{Complex(1), 0, 0, -i};
  const std::array<int, 4> deg{0, 1, 1, 2};
  std::array<Complex, 4> sT;
  for (int k = 0; k < 4; ++k) sT[k] = s[k] * Complex((deg[k] * (deg[k] - 1) / 2) % 2 ? -1 : 1);
  // top coefficient of a∧b: a0 b12 + a1 b2 - a2 b1 + a12 b0.
  Complex c = sT[0] * t[3] + sT[1] * t[2] - sT[2] * t[1] + sT[3] * t[0];
  CHECK(c == Complex(0, -2));
  F w = e(2, {1, 2});
  F one = F::scalar(2, Complex(1));
  CHECK(mukai_scalar(one + w * i, one - w * i) == c);
}

TEST_CASE("Mukai graded symmetry and parity vanishing") {
  testing_support::Rng rng(13);
  for (int m = 1; m <= 6; ++m) {
    for (int k = 0; k < 10; ++k) {
      F s = testing_support::random_form(rng, m), t = testing_support::random_form(rng, m);
      Complex sign((m * (m - 1) / 2) % 2 ? -1 : 1);
      CHECK(mukai_scalar(s, t) == mukai_scalar(t, s) * sign);
      if (m % 2 == 0) {
        F se, to(m);
        se = F(m);
        for (const auto& [mask, c] : s.terms()) {
          if (popcount(mask) % 2 == 0) se.add(mask, c);
        }
        for (const auto& [mask, c] : t.terms()) {
          if (popcount(mask) % 2 == 1) to.add(mask, c);
        }
        CHECK(mukai_pair(se, to).is_zero());
      }
    }
  }
}

TEST_CASE("spin action examples") {
  CMatrix b(2, 2);
  b(0, 1) = 1;
  b(1, 0) = -1;
  F one = F::scalar(2, Complex(1));
  CHECK(spin_act(SoElement<Complex>::from_B(b), one) == -e(2, {1, 2}));
  F exp_beta = exp_spin_act(SoElement<Complex>::from_beta(b), e(2, {1, 2}));
  CHECK(exp_beta == one + e(2, {1, 2}));
  CHECK(spin_act(SoElement<Complex>::from_A(CMatrix::identity(2)), e(2, {1})).is_zero());
}

TEST_CASE("exp(beta) agrees with a brute-force contraction sum") {
  testing_support::Rng rng(17);
  for (int k = 0; k < 20; ++k) {
    const int m = 4;
    CMatrix beta = testing_support::random_antisymmetric(rng, m);
    F phi = testing_support::random_form(rng, m);
    // sum over ordered index pairs with the factor 1/2
    auto ib = [&](const F& f) {
      F r(m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          r += contract_basis(j, contract_basis(i, f)) * (beta(i, j) * Complex(Rational(1, 2)));
        }
      }
      return r;
    };
    F expected = phi, term = phi;
    for (int n = 1; n <= m; ++n) {
      term = ib(term) * Complex(Rational(1, n));
      expected += term;
    }
    CHECK(beta_exp_act(beta, phi) == expected);
  }
}

TEST_CASE("spin action commutator realizes the so action") {
  const int m = 3;
  std::vector<SoElement<Complex>> basis;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      CMatrix a(m, m);
      a(i, j) = 1;
      basis.push_back(SoElement<Complex>::from_A(a));
      if (i < j) {
        CMatrix s(m, m);
        s(i, j) = 1;
        s(j, i) = -1;
        basis.push_back(SoElement<Complex>::from_B(s));
        basis.push_back(SoElement<Complex>::from_beta(s));
      }
    }
  }
  std::vector<GV> vs;
  for (int i = 0; i < m; ++i) {
    vs.push_back(GV::basis_vector(m, i));
    vs.push_back(GV::basis_covector(m, i));
  }
  for (const auto& x : basis) {
    for (const auto& v : vs) {
      for (Mask s = 0; s <= full_mask(m); ++s) {
        F phi = F::monomial(m, s, Complex(1));
        F lhs = spin_act(x, clifford_act(v, phi)) - clifford_act(v, spin_act(x, phi));
        CHECK(lhs == clifford_act(so_apply(x, v), phi));
      }
    }
  }
}

TEST_CASE("group lifts intertwine the Clifford action") {
  testing_support::Rng rng(19);
  for (int k = 0; k < 20; ++k) {
    const int m = 4;
    std::vector<Transform> ts{BTransform{testing_support::random_antisymmetric(rng, m)},
                              BetaTransform{testing_support::random_antisymmetric(rng, m)},
                              GLTransform{testing_support::random_gl(rng, m), false}};
    for (const auto& t : ts) {
      GV v(m);
      for (int i = 0; i < m; ++i) {
        v.vec[i] = rng.complex();
        v.covec[i] = rng.complex();
      }
      F phi = testing_support::random_form(rng, m);
      CHECK(spin_lift(t, clifford_act(v, phi)) == clifford_act(apply_transform(t, v), spin_lift(t, phi)));
      CHECK(pairing(apply_transform(t, v), apply_transform(t, v)) == pairing(v, v));
    }
  }
}

TEST_CASE("density twist needs an exact square root") {
  CMatrix g = CMatrix::identity(2);
  g(0, 0) = 2;
  F one = F::scalar(2, Complex(1));
  CHECK_THROWS_WITH_AS(spin_lift(GLTransform{g, true}, one), doctest::Contains("no exact square root"), DomainError);
  g(1, 1) = 2;
  CHECK(spin_lift(GLTransform{g, true}, one) == one * Complex(2));
  CHECK(spin_lift(GLTransform{g, false}, e(2, {1})) == e(2, {1}) * Complex(Rational(1, 2)));
}
