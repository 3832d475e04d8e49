#include <doctest.h>

#include "gcg/gc_linear.hpp"
#include "support.hpp"

using namespace gcg;
using F = CForm;
using GV = CGenVector;

namespace {

F e(int m, std::initializer_list<int> idx, Complex c = Complex(1)) {
  Mask mask = 0;
  for (int i : idx) mask |= Mask{1} << (i - 1);
  return F::monomial(m, mask, c);
}

bool all_real(const CMatrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_real()) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("validation of the standard structures") {
  CMatrix w = standard_symplectic(1);
  CMatrix js = j_symplectic(w);
  CHECK(js == CMatrix::from_rows({{0, 0, 0, -1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}}));
  CHECK_NOTHROW(GCStructure::validate(js));
  CHECK_NOTHROW(GCStructure::validate(j_complex(standard_complex(2))));
  CMatrix wrong(4, 4);
  wrong.set_block(0, 0, standard_complex(1));
  wrong.set_block(2, 2, standard_complex(1).transpose());
  CHECK_THROWS_WITH_AS(GCStructure::validate(wrong), doctest::Contains("orthogonality"), ValidationError);
  CHECK_THROWS_WITH_AS(GCStructure::validate(CMatrix::identity(4)), doctest::Contains("J^2 = -1"), ValidationError);
}

TEST_CASE("eigenbundles of the standard structures") {
  CMatrix w = standard_symplectic(2);
  auto ls = eigenbundle(GCStructure::validate(j_symplectic(w)));
  std::vector<GV> expected;
  for (int i = 0; i < 4; ++i) {
    GV v = GV::basis_vector(4, i);
    for (int j = 0; j < 4; ++j) v.covec[j] = -Complex::i() * w(i, j);
    expected.push_back(v);
  }
  CHECK(same_subspace(ls.basis(), expected));

  auto lc = eigenbundle(GCStructure::validate(j_complex(standard_complex(2))));
  // T_{0,1} ⊕ T*_{1,0}: ∂x + i∂y and dx + i dy in each pair
  std::vector<GV> t01{GV({1, Complex::i(), 0, 0}, {0, 0, 0, 0}), GV({0, 0, 1, Complex::i()}, {0, 0, 0, 0}),
                      GV({0, 0, 0, 0}, {1, Complex::i(), 0, 0}), GV({0, 0, 0, 0}, {0, 0, 1, Complex::i()})};
  CHECK(same_subspace(lc.basis(), t01));
  CHECK(intersection_dim(lc, lc.conj()) == 0);

  auto sum = eigenbundle(GCStructure::validate(direct_sum(j_complex(standard_complex(1)), j_symplectic(standard_symplectic(1)))));
  CHECK(sum.type() == 1);
}

TEST_CASE("type and canonical spinor") {
  CMatrix w = standard_symplectic(2);
  auto cs = canonical_spinor(GCStructure::validate(j_symplectic(w)));
  CHECK(cs.k == 0);
  CHECK(proportional(cs.generator, wedge_exp(two_form_from_matrix<Complex>(w) * Complex::i())));

  auto cc = canonical_spinor(GCStructure::validate(j_complex(standard_complex(2))));
  CHECK(cc.k == 2);
  F dz1 = e(4, {1}) + e(4, {2}, Complex::i());
  F dz2 = e(4, {3}) + e(4, {4}, Complex::i());
  CHECK(proportional(cc.generator, wedge(dz1, dz2)));

  testing_support::Rng rng(71);
  for (int m : {2, 4, 6}) {
    for (int k = 0; 2 * k <= m; ++k) {
      for (int rep = 0; rep < 5; ++rep) {
        auto s = GCStructure::validate(testing_support::random_structure(rng, m, k, true));
        auto c = canonical_spinor(s);
        CHECK(c.k == type_of(s));
        CHECK(c.k == eigenbundle(s).type());
        CHECK(c.k == c.generator.lowest_degree());
        // ω^{n-k} ∧ Ω ∧ Ω̄ ≠ 0
        F om = two_form_from_matrix<Complex>(c.omega_form());
        F top = wedge(c.omega_k, c.omega_k.conj());
        for (int p = 0; p < m / 2 - c.k; ++p) top = wedge(top, om);
        CHECK_FALSE(top.is_zero());
        CHECK_FALSE(mukai_scalar(c.generator, c.generator.conj()).is_zero());
        CHECK(all_real(c.b_form()));
        CHECK(null_space_isotropic(c.generator) == eigenbundle(s));
      }
    }
  }
}

TEST_CASE("grading projections") {
  // complex case: φ ∈ Ω^{p,q} lies in U^{p-q}
  auto sc = GCStructure::validate(j_complex(standard_complex(2)));
  F dz1 = e(4, {1}) + e(4, {2}, Complex::i());
  F dz2b = e(4, {3}) - e(4, {4}, Complex::i());
  F pq = wedge(dz1, dz2b);  // (1,1)
  for (int k = -2; k <= 2; ++k) CHECK(grading_project(sc, pq, k) == (k == 0 ? pq : F(4)));
  F p20 = wedge(dz1, e(4, {3}) + e(4, {4}, Complex::i()));
  CHECK(grading_project(sc, p20, 2) == p20);

  // symplectic m=2: 1 = ½(1+iω) + ½(1-iω)
  auto ss = GCStructure::validate(j_symplectic(standard_symplectic(1)));
  F one = F::scalar(2, Complex(1));
  F w = e(2, {1, 2});
  CHECK(grading_project(ss, one, 1) == (one + w * Complex::i()) * Complex(Rational(1, 2)));
  CHECK(grading_project(ss, one, -1) == (one - w * Complex::i()) * Complex(Rational(1, 2)));
  CHECK(grading_project(ss, one, 0).is_zero());

  testing_support::Rng rng(73);
  for (int rep = 0; rep < 10; ++rep) {
    const int m = 4;
    auto s = GCStructure::validate(testing_support::random_structure(rng, m, rng.uniform(0, 2), true));
    F phi = testing_support::random_form(rng, m);
    F sum(m);
    auto x = SoElement<Complex>::from_matrix(s.matrix());
    for (int k = -2; k <= 2; ++k) {
      F part = grading_project(s, phi, k);
      CHECK(spin_act(x, part) == part * Complex(0, k));
      sum += part;
    }
    CHECK(sum == phi);
    auto c = canonical_spinor(s);
    F top = grading_project(s, phi, 2);
    if (!top.is_zero()) CHECK(proportional(top, c.generator));
    F bottom = grading_project(s, phi, -2);
    if (!bottom.is_zero()) CHECK(proportional(bottom, c.generator.conj()));
  }
}

TEST_CASE("Poisson block") {
  CMatrix w = standard_symplectic(2);
  CHECK(poisson_of(GCStructure::validate(j_symplectic(w))) == -inverse(w));
  CHECK(poisson_of(GCStructure::validate(j_complex(standard_complex(2)))).is_zero());
  testing_support::Rng rng(79);
  for (int rep = 0; rep < 10; ++rep) {
    auto s = GCStructure::validate(testing_support::random_structure(rng, 4, rng.uniform(0, 2), true));
    CMatrix p = poisson_of(s);
    CHECK(p.is_antisymmetric());
    // image of P is Δ = π(J T*)
    std::vector<CVector> jt;
    for (int i = 0; i < 4; ++i) jt.push_back(s.matrix().block(0, 4 + i, 4, 1).col(0));
    CHECK(same_span(row_space_basis(p.to_rows(), 4), row_space_basis(jt, 4), 4));
    CHECK(static_cast<int>(row_space_basis(jt, 4).size()) == 4 - 2 * type_of(s));
  }
}

TEST_CASE("tensor identity with the Poisson graph") {
  testing_support::Rng rng(83);
  for (int m : {2, 4}) {
    for (int rep = 0; rep < 8; ++rep) {
      auto s = GCStructure::validate(testing_support::random_structure(rng, m, rng.uniform(0, m / 2), true));
      auto l = eigenbundle(s);
      auto lhs = tensor_product(transpose(l), l.conj());
      CHECK(lhs == graph_of_bivector(Complex(0, Rational(1, 2)) * poisson_of(s)));
    }
  }
}

TEST_CASE("pointwise Darboux decomposition") {
  auto ds = darboux_point(GCStructure::validate(j_symplectic(standard_symplectic(2))));
  CHECK(ds.k == 0);
  CHECK(ds.b_tilde.is_zero());
  CHECK(ds.omega0 == standard_symplectic(2));
  auto dc = darboux_point(GCStructure::validate(j_complex(standard_complex(2))));
  CHECK(dc.k == 2);
  CHECK(dc.delta.empty());
  CHECK(dc.omega0.is_zero());

  testing_support::Rng rng(89);
  for (int m : {2, 4, 6}) {
    for (int rep = 0; rep < 8; ++rep) {
      int k = rng.uniform(0, m / 2);
      auto s = GCStructure::validate(testing_support::random_structure(rng, m, k));
      auto d = darboux_point(s);
      CHECK(d.k == k);
      CHECK(d.line_equal);
      CHECK(d.symplectic_on_delta);
      CHECK(d.complex_on_n);
      CHECK(all_real(d.b_tilde));
      CHECK(all_real(d.omega0));
    }
  }
}

TEST_CASE("interpolation between complex and symplectic") {
  // flat hyperkähler R^4: I standard, ω_J = Re(dz1∧dz2)
  CMatrix ji = j_complex(standard_complex(2));
  CMatrix wj(4, 4);
  // Re(dz1∧dz2) = dx1∧dx3 - dy1∧dy3 with coordinates (x1,y1,x2,y2)
  wj(0, 2) = 1;
  wj(2, 0) = -1;
  wj(1, 3) = -1;
  wj(3, 1) = 1;
  CMatrix jw = j_symplectic(wj);
  CHECK(ji * jw == -(jw * ji));
  const std::vector<std::pair<Rational, Rational>> pts{{0, 1}, {Rational(3, 5), Rational(4, 5)},
                                                       {Rational(4, 5), Rational(3, 5)}, {1, 0}};
  for (auto [a, b] : pts) {
    CMatrix j = Complex(a) * ji + Complex(b) * jw;
    CHECK_NOTHROW(GCStructure::validate(j));
  }
}
