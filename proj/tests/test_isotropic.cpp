#include <doctest.h>

#include "gcg/isotropic.hpp"
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

CMatrix e12(int m = 2) {
  CMatrix b(m, m);
  b(0, 1) = 1;
  b(1, 0) = -1;
  return b;
}

}  // namespace

TEST_CASE("canonical forms of V, V* and a B graph") {
  auto v = tangent_space(3);
  CHECK(v.type() == 0);
  CHECK(v.eps().is_zero());
  CHECK(v.delta().size() == 3);
  auto vs = cotangent_space(3);
  CHECK(vs.type() == 3);
  CHECK(vs.parity() == 1);
  CHECK(vs.delta().empty());

  std::vector<GV> basis{GV({1, 0}, {0, 1}), GV({0, 1}, {-1, 0})};
  auto g = MaxIsotropic::from_basis(basis);
  CHECK(g.type() == 0);
  CHECK(g.eps() == e12());
}

TEST_CASE("invalid bases are rejected with the offending pair") {
  std::vector<GV> bad{GV({1, 0}, {1, 0}), GV({0, 1}, {0, 0})};
  CHECK_THROWS_WITH_AS(MaxIsotropic::from_basis(bad), doctest::Contains("1 and 1"), ValidationError);
  std::vector<GV> cross{GV({1, 0}, {0, 0}), GV({0, 0}, {1, 0})};
  CHECK_THROWS_WITH_AS(MaxIsotropic::from_basis(cross), doctest::Contains("1 and 2"), ValidationError);
  std::vector<GV> deficient{GV({1, 0}, {0, 0}), GV({2, 0}, {0, 0})};
  CHECK_THROWS_WITH_AS(MaxIsotropic::from_basis(deficient), doctest::Contains("rank 1"), ValidationError);
}

TEST_CASE("reconstruction from canonical data") {
  testing_support::Rng rng(23);
  for (int k = 0; k < 40; ++k) {
    auto l = testing_support::random_isotropic(rng, rng.uniform(1, 5));
    CHECK(same_subspace(l.reconstruct(), l.basis()));
    CHECK(l.eps().is_antisymmetric());
  }
}

TEST_CASE("pure spinor examples") {
  CHECK(pure_spinor(tangent_space(3)) == F::scalar(3, Complex(1)));
  CHECK(pure_spinor(cotangent_space(3)) == e(3, {1, 2, 3}));
  F one = F::scalar(2, Complex(1));
  CHECK(pure_spinor(graph_of_two_form(e12())) == one - e(2, {1, 2}));
}

TEST_CASE("null space examples") {
  auto ns = null_space(F::scalar(3, Complex(1)));
  CHECK(ns.pure);
  CHECK(same_subspace(ns.basis, tangent_space(3).basis()));

  auto bad = null_space(F::scalar(4, Complex(1)) + e(4, {1, 2, 3, 4}));
  CHECK_FALSE(bad.pure);
  CHECK(bad.basis.empty());

  // exp(iω), ω = e12 + e34: null space {X - i·i_X ω}
  CMatrix w(4, 4);
  w(0, 1) = 1;
  w(1, 0) = -1;
  w(2, 3) = 1;
  w(3, 2) = -1;
  F phi = wedge_exp(two_form_from_matrix<Complex>(w) * Complex::i());
  auto sympl = null_space(phi);
  CHECK(sympl.pure);
  std::vector<GV> expected;
  for (int i = 0; i < 4; ++i) {
    GV v = GV::basis_vector(4, i);
    for (int j = 0; j < 4; ++j) v.covec[j] = -Complex::i() * w(i, j);
    expected.push_back(v);
  }
  CHECK(same_subspace(sympl.basis, expected));
  CHECK_THROWS_AS(null_space(F(4)), ValidationError);
}

TEST_CASE("null spaces are isotropic") {
  testing_support::Rng rng(29);
  for (int k = 0; k < 40; ++k) {
    int m = rng.uniform(1, 5);
    F phi = testing_support::random_form(rng, m, 20);
    if (phi.is_zero()) continue;
    auto ns = null_space(phi);
    for (const auto& a : ns.basis) {
      for (const auto& b : ns.basis) CHECK(inner(a, b).is_zero());
    }
  }
}

TEST_CASE("spinor round trip and lowest degree") {
  testing_support::Rng rng(31);
  for (int m = 1; m <= 6; ++m) {
    for (int k = 0; k < 15; ++k) {
      auto l = testing_support::random_isotropic(rng, m);
      F phi = pure_spinor(l);
      CHECK(null_space_isotropic(phi) == l);
      CHECK(phi.lowest_degree() == l.type());
      // lowest component decomposable: its own null space is maximal
      CHECK(null_space(phi.component(l.type())).pure);
    }
  }
}

TEST_CASE("the complement choice does not change the spinor line") {
  // Same L presented with permuted coordinates gives a different pivot
  // complement; compare lines after undoing the permutation.
  testing_support::Rng rng(37);
  for (int k = 0; k < 20; ++k) {
    const int m = 4;
    auto l = testing_support::random_isotropic(rng, m);
    CMatrix p(m, m);
    for (int i = 0; i < m; ++i) p(i, (i + 1) % m) = 1;
    Transform perm = GLTransform{p, false};
    auto moved = transform(l, perm);
    F back = spin_lift(inverse(perm), pure_spinor(moved));
    CHECK(proportional(back, pure_spinor(l)));
  }
}

TEST_CASE("equivariance of the null space") {
  testing_support::Rng rng(41);
  for (int k = 0; k < 40; ++k) {
    const int m = rng.uniform(2, 5);
    auto l = testing_support::random_isotropic(rng, m);
    Transform t = testing_support::random_transform(rng, m, false);
    F phi = pure_spinor(l);
    CHECK(null_space_isotropic(spin_lift(t, phi)) == transform(l, t));
  }
}

TEST_CASE("exp of single so blocks") {
  testing_support::Rng rng(43);
  const int m = 4;
  for (int k = 0; k < 10; ++k) {
    auto l = testing_support::random_isotropic(rng, m);
    F phi = pure_spinor(l);
    auto b = SoElement<Complex>::from_B(testing_support::random_antisymmetric(rng, m));
    CHECK(null_space_isotropic(exp_spin_act(b, phi)) == transform(l, exp_single_block(b)));
    CMatrix nil(m, m);
    nil(0, 2) = 1;
    nil(1, 3) = Complex(2);
    auto a = SoElement<Complex>::from_A(nil);
    CHECK(null_space_isotropic(exp_spin_act(a, phi)) == transform(l, exp_single_block(a)));
  }
  CHECK_THROWS_AS(exp_single_block(SoElement<Complex>::from_A(CMatrix::identity(2))), DomainError);
}

TEST_CASE("transform examples") {
  testing_support::Rng rng(47);
  for (int k = 0; k < 20; ++k) {
    const int m = 4;
    auto l = testing_support::random_isotropic(rng, m);
    CMatrix b = testing_support::random_antisymmetric(rng, m);
    auto lb = transform(l, BTransform{b});
    CHECK(lb.type() == l.type());
    CHECK(same_span(lb.delta(), l.delta(), m));
    // ε shifts by the restriction of B to Δ (same Δ basis after rref)
    CMatrix d = CMatrix::from_rows(l.delta().empty() ? std::vector<CVector>{} : l.delta());
    if (!l.delta().empty()) CHECK(lb.eps() == l.eps() + d * b * d.transpose());
  }
  auto vstar = cotangent_space(2);
  CHECK(transform(vstar, BetaTransform{e12()}).type() == 0);
  CHECK(transform(tangent_space(2), GLTransform{Complex(2) * CMatrix::identity(2)}) == tangent_space(2));
  CMatrix singular(2, 2);
  CHECK_THROWS_AS(transform(tangent_space(2), GLTransform{singular}), DomainError);
}

TEST_CASE("parity is stable under all transforms") {
  testing_support::Rng rng(53);
  for (int k = 0; k < 60; ++k) {
    const int m = rng.uniform(2, 6);
    auto l = testing_support::random_isotropic(rng, m);
    auto t = transform(l, testing_support::random_transform(rng, m, false));
    CHECK(t.parity() == l.parity());
  }
}

TEST_CASE("transversality iff nonzero pairing") {
  testing_support::Rng rng(59);
  int transverse = 0, meeting = 0;
  for (int k = 0; k < 80; ++k) {
    const int m = rng.uniform(2, 5);
    auto a = testing_support::random_isotropic(rng, m);
    auto b = k % 3 == 0 ? transform(a, BTransform{testing_support::random_antisymmetric(rng, m)})
                        : testing_support::random_isotropic(rng, m);
    bool zero_meet = intersection_dim(a, b) == 0;
    CHECK(zero_meet == !mukai_scalar(pure_spinor(a), pure_spinor(b)).is_zero());
    (zero_meet ? transverse : meeting)++;
  }
  CHECK(transverse > 5);
  CHECK(meeting > 5);
}

TEST_CASE("graph over the cotangent space") {
  auto g = graph_over_cotangent(cotangent_space(3));
  CHECK(g.F.size() == 3);
  CHECK(g.gamma.is_zero());
  CHECK(g.beta.is_zero());
  auto t = graph_over_cotangent(tangent_space(3));
  CHECK(t.F.empty());
  CHECK(t.spinor == F::scalar(3, Complex(1)));
  auto b = graph_over_cotangent(graph_of_bivector(e12()));
  CHECK(b.gamma == e12());
  testing_support::Rng rng(61);
  for (int k = 0; k < 40; ++k) {
    auto l = testing_support::random_isotropic(rng, rng.uniform(1, 5));
    auto gg = graph_over_cotangent(l);
    CHECK(proportional(gg.spinor, pure_spinor(l)));
  }
}

TEST_CASE("linear tensor product identities") {
  testing_support::Rng rng(67);
  for (int k = 0; k < 20; ++k) {
    const int m = rng.uniform(2, 5);
    auto l = testing_support::random_isotropic(rng, m);
    CHECK(tensor_product(cotangent_space(m), l) == cotangent_space(m));
    CMatrix b1 = testing_support::random_antisymmetric(rng, m), b2 = testing_support::random_antisymmetric(rng, m);
    CHECK(tensor_product(graph_of_two_form(b1), graph_of_two_form(b2)) == graph_of_two_form(b1 + b2));
    std::vector<CVector> delta{testing_support::random_matrix(rng, 1, m).row(0)};
    if (rank(CMatrix::from_rows(delta)) == 0) continue;
    auto d = distribution_plus_annihilator(m, delta);
    CHECK(tensor_product(d, d) == d);
    // spinor of a tensor product is the wedge of the factors when L1∩L2∩V* = 0
    auto l2 = testing_support::random_isotropic(rng, m);
    auto t = tensor_product(l, l2);
    CMatrix ann(static_cast<int>(l.annihilator().size() + l2.annihilator().size()), m);
    int r = 0;
    for (const auto& x : l.annihilator()) ann.set_block(r++, 0, CMatrix::from_rows({x}));
    for (const auto& x : l2.annihilator()) ann.set_block(r++, 0, CMatrix::from_rows({x}));
    bool meet_zero = rank(ann) == static_cast<int>(l.annihilator().size() + l2.annihilator().size());
    if (meet_zero) CHECK(proportional(pure_spinor(t), wedge(pure_spinor(l), pure_spinor(l2))));
  }
}
