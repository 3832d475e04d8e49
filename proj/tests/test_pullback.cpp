#include <doctest.h>

#include "gcg/linalg.hpp"
#include "gcg/pullback.hpp"
#include "support.hpp"

using namespace gcg;
using testing_support::Rng;

namespace {

Poly u(int s, int a) { return Poly::var(s, a - 1); }

PVector unit(int m, int i) {
  PVector v(m, Poly(0));
  v[i - 1] = Poly(1);
  return v;
}

// Both frames span maximal isotropics, so equality is mutual orthogonality.
bool same_dirac(const std::vector<PSection>& a, const std::vector<PSection>& b) {
  for (const auto& x : a) {
    for (const auto& y : b) {
      if (!pairing(x, y).is_zero()) return false;
    }
  }
  return true;
}

std::vector<PSection> graph_of(const PMatrix& b) {
  std::vector<PSection> r;
  for (int i = 1; i <= b.rows(); ++i) r.push_back(PSection(unit(b.rows(), i), contract_two(b, unit(b.rows(), i))));
  return r;
}

std::vector<PSection> cotangent(int m) {
  std::vector<PSection> r;
  for (int i = 1; i <= m; ++i) r.push_back(PSection(PVector(m, Poly(0)), unit(m, i)));
  return r;
}

PMatrix two(int m, std::initializer_list<std::tuple<int, int, Complex>> entries) {
  PMatrix f(m, m);
  for (auto [i, j, c] : entries) {
    f(i - 1, j - 1) += Poly(c);
    f(j - 1, i - 1) -= Poly(c);
  }
  return f;
}

SubmanifoldData identity_embedding(int m, PMatrix f = {}) {
  std::vector<Poly> e;
  for (int i = 1; i <= m; ++i) e.push_back(u(m, i));
  return SubmanifoldData::make(e, m, std::move(f));
}

// polynomial surface (u, v, u², uv) in R^4
SubmanifoldData surface(PMatrix f = {}) {
  return SubmanifoldData::make({u(2, 1), u(2, 2), u(2, 1) * u(2, 1), u(2, 1) * u(2, 2)}, 2, std::move(f));
}

PMatrix closed_two_form(Rng& rng, int m) {
  return two_form_matrix(exterior_d(testing_support::random_pform(rng, m, 2, 1, 50)));
}

}  // namespace

TEST_CASE("submanifold data") {
  auto s = surface();
  CHECK(s.conormal.size() == 2);
  for (const auto& k : s.conormal) CHECK(s.pull_covector(k) == PVector(2, Poly(0)));
  CHECK(s.pull_vector(s.push(unit(2, 1))) == unit(2, 1));
  // dF must equal ι*H
  PForm h = PForm::monomial(3, 0b111, Poly(1));
  CHECK_THROWS_AS(SubmanifoldData::make({u(3, 1), u(3, 2), u(3, 3)}, 3, {}, h), ValidationError);
  PMatrix f = two(3, {{1, 2, Complex(0)}});
  f(0, 1) = u(3, 3);
  f(1, 0) = -u(3, 3);
  CHECK_NOTHROW(SubmanifoldData::make({u(3, 1), u(3, 2), u(3, 3)}, 3, f, h));
  // no constant minor
  CHECK_THROWS_AS(SubmanifoldData::make({u(1, 1) * u(1, 1), u(1, 1) * u(1, 1) * u(1, 1)}, 1), ValidationError);
}

TEST_CASE("pullback of Dirac structures") {
  Rng rng(211);
  const int m = 4;
  for (int rep = 0; rep < 4; ++rep) {
    PMatrix b = closed_two_form(rng, m);
    // S = M leaves L unchanged
    auto full = pullback_dirac(graph_of(b), identity_embedding(m));
    CHECK(same_dirac(full.frame, graph_of(b)));
    CHECK(full.tensor.empty());
    // graph(B) pulls back to graph(ι*B)
    auto s = surface();
    auto pb = pullback_dirac(graph_of(b), s);
    PMatrix ib = s.tangent.transpose() * s.restrict(b) * s.tangent;
    CHECK(same_dirac(pb.frame, graph_of(ib)));
    CHECK(pb.tensor.empty());
    CHECK(pullback_form(s, two_form_from_matrix<Poly>(b)) == two_form_from_matrix<Poly>(ib));
  }
  auto s = SubmanifoldData::affine({Complex(1), Complex(0), Complex(2), Complex(0)},
                                   {{Complex(1), Complex(1), Complex(0), Complex(0)},
                                    {Complex(0), Complex(0), Complex(1), Complex(3)}});
  auto ct = pullback_dirac(cotangent(m), s);
  CHECK(same_dirac(ct.frame, cotangent(2)));
  CHECK(ct.generic_rank == 4);

  // L = graph of x1 ∂1∧∂2 on the line x2 = 0: L ∩ K⊥ jumps at x1 = 0
  PMatrix beta(2, 2);
  beta(0, 1) = Poly::var(2, 0);
  beta(1, 0) = -Poly::var(2, 0);
  std::vector<PSection> gb;
  for (int i = 1; i <= 2; ++i) gb.push_back(PSection(contract_two(beta, unit(2, i)), unit(2, i)));
  auto line = SubmanifoldData::make({u(1, 1), Poly(0)}, 1);
  auto ok = pullback_dirac(gb, line, {{Complex(1)}, {Complex(2)}});
  CHECK(ok.generic_rank == 1);
  CHECK(same_dirac(ok.frame, {PSection(unit(1, 1), PVector(1, Poly(0)))}));
  CHECK_THROWS_AS(pullback_dirac(gb, line, {{Complex(1)}, {Complex(0)}}), DomainError);
}

TEST_CASE("generalized tangent bundle") {
  auto s0 = surface();
  auto t0 = generalized_tangent(s0).frame;
  std::vector<PSection> expect;
  for (int a = 0; a < 2; ++a) expect.push_back(PSection(s0.tangent.col(a), PVector(4, Poly(0))));
  for (const auto& k : s0.conormal) expect.push_back(PSection(PVector(4, Poly(0)), k));
  CHECK(same_dirac(t0, expect));

  auto s = surface(two(2, {{1, 2, Complex(1)}}));
  auto t = generalized_tangent(s).frame;
  REQUIRE(t.size() == 4);
  for (const auto& e : t) {
    CHECK(s.pull_covector(e.covec) == contract_two(s.f, s.pull_vector(e.vec)));
    for (const auto& e2 : t) CHECK(pairing(e, e2).is_zero());
  }
  Rng rng(223);
  PMatrix b = closed_two_form(rng, 4);
  auto full = identity_embedding(4, b);
  CHECK(same_dirac(generalized_tangent(full).frame, graph_of(b)));
}

TEST_CASE("symplectic branes") {
  // coordinates (x1, x2, p1, p2), ω = dx1∧dp1 + dx2∧dp2
  CMatrix w(4, 4);
  w(0, 2) = Complex(1);
  w(2, 0) = Complex(-1);
  w(1, 3) = Complex(1);
  w(3, 1) = Complex(-1);
  GCField j = GCField::validate(to_poly(j_symplectic(w)));
  const Complex o(0), l(1);
  auto lag = SubmanifoldData::affine({o, o, o, o}, {{l, o, o, o}, {o, l, o, o}});
  auto r = brane_check(j, lag);
  CHECK(r.compatible);
  CHECK(r.lagrangian);
  CHECK(r.coisotropic);
  CHECK(r.delta_rank == 2);
  REQUIRE_FALSE(r.ell.empty());
  for (const auto& ell : r.ell) {
    REQUIRE(ell.size() == 2);
    CMatrix proj(2, 4);
    for (int a = 0; a < 2; ++a) {
      for (int i = 0; i < 4; ++i) proj(a, i) = ell[a].vec[i];
    }
    CHECK(rank(proj) == 2);
  }

  auto sym = SubmanifoldData::affine({o, o, o, o}, {{l, o, o, o}, {o, o, l, o}});
  auto bad = brane_check(j, sym);
  CHECK_FALSE(bad.compatible);
  REQUIRE(bad.violation.has_value());
  CHECK_FALSE(bad.violation->value.is_zero());

  // F on a Lagrangian must vanish
  auto lagf = SubmanifoldData::affine({o, o, o, o}, {{l, o, o, o}, {o, l, o, o}}, two(2, {{1, 2, l}}));
  CHECK_FALSE(brane_check(j, lagf).compatible);
}

TEST_CASE("space-filling brane") {
  // ω = dx1∧dp2 + dx2∧dp1, F = dx1∧dp1 - dx2∧dp2 in coordinates (x1, x2, p1, p2)
  const Complex one(1), m1(-1);
  PMatrix wp = two(4, {{1, 4, one}, {2, 3, one}});
  PMatrix fp = two(4, {{1, 3, one}, {2, 4, m1}});
  CMatrix w = eval(wp, Point{});
  CMatrix f = eval(fp, Point{});
  GCField j = GCField::validate(to_poly(j_symplectic(w)));
  auto r = brane_check(j, identity_embedding(4, fp));
  REQUIRE(r.compatible);
  CHECK(r.space_filling);
  CHECK(r.delta_rank == 0);
  REQUIRE(r.induced_j.has_value());
  CMatrix oracle = -(inverse(w) * f);
  CHECK(*r.induced_j == to_poly(oracle));
  CHECK(oracle * oracle == -CMatrix::identity(4));
  REQUIRE(r.holomorphic_form.has_value());
  CHECK(r.holomorphic_sign == -1);
  CHECK(*r.holomorphic_form == fp + Poly(Complex::i()) * wp);

  CHECK_FALSE(brane_check(j, identity_embedding(4)).compatible);
}

TEST_CASE("complex branes") {
  CMatrix jc = standard_complex(2);
  GCField j = GCField::validate(to_poly(j_complex(jc)));
  const Complex o(0), l(1);
  // (1,1) form dx1∧dy1 versus Re(dz1∧dz2) = dx1∧dx2 - dy1∧dy2
  PMatrix f11 = two(4, {{1, 2, l}});
  PMatrix f20 = two(4, {{1, 3, l}, {2, 4, Complex(-1)}});
  auto good = brane_check(j, identity_embedding(4, f11));
  CHECK(good.compatible);
  CHECK(good.f_type_11);
  REQUIRE(good.induced_j.has_value());
  CHECK(*good.induced_j * *good.induced_j == -PMatrix::identity(4));
  CHECK_FALSE(brane_check(j, identity_embedding(4, f20)).compatible);

  // {z3 = 0} in C^3
  GCField j3 = GCField::validate(to_poly(j_complex(standard_complex(3))));
  std::vector<CVector> dirs;
  for (int a = 0; a < 4; ++a) {
    CVector d(6, o);
    d[a] = l;
    dirs.push_back(d);
  }
  CVector p0(6, o);
  CHECK(brane_check(j3, SubmanifoldData::affine(p0, dirs, f11)).compatible);
  CHECK_FALSE(brane_check(j3, SubmanifoldData::affine(p0, dirs, f20)).compatible);

  // family: compatible ⇔ TS J-stable and F of type (1,1)
  Rng rng(227);
  int seen_ok = 0, seen_bad = 0;
  for (int rep = 0; rep < 12; ++rep) {
    CVector d1(4), d2(4);
    for (int i = 0; i < 4; ++i) d1[i] = Complex(rng.uniform(-2, 2));
    if (rep % 2 == 0) {
      d2 = jc * d1;
    } else {
      for (int i = 0; i < 4; ++i) d2[i] = Complex(rng.uniform(-2, 2));
    }
    CMatrix dm(4, 2);
    for (int i = 0; i < 4; ++i) {
      dm(i, 0) = d1[i];
      dm(i, 1) = d2[i];
    }
    if (rank(dm) < 2) continue;
    CMatrix stacked(4, 4);
    stacked.set_block(0, 0, dm);
    stacked.set_block(0, 2, jc * dm);
    bool stable = rank(stacked) == 2;
    auto s = SubmanifoldData::affine(CVector(4, o), {d1, d2}, two(2, {{1, 2, Complex(rng.uniform(-3, 3))}}));
    bool compat = brane_check(j, s).compatible;
    CHECK(compat == stable);
    (compat ? seen_ok : seen_bad)++;

    PMatrix fm = to_poly(testing_support::random_antisymmetric(rng, 4));
    CMatrix fc = eval(fm, Point{});
    bool type11 = jc.transpose() * fc * jc == fc;
    if (rep % 3 == 0) {
      // (1,1) part of F
      fc = Complex(Rational(1, 2)) * (fc + jc.transpose() * fc * jc);
      fm = to_poly(fc);
      type11 = true;
    }
    auto full = brane_check(j, identity_embedding(4, fm));
    CHECK(full.compatible == type11);
    if (full.compatible) CHECK(full.f_type_11);
  }
  CHECK(seen_ok > 0);
  CHECK(seen_bad > 0);
}

TEST_CASE("space-filling branes of deformed complex structures") {
  Chart c = Chart::complex(2);
  PMatrix dzdz = two_form_matrix(wedge(PForm::linear(c.d_dz(0), Variance::multivector),
                                       PForm::linear(c.d_dz(1), Variance::multivector)));
  Rng rng(229);
  for (int rep = 0; rep < 3; ++rep) {
    Poly f = Poly(rng.complex()) * pow(c.z(0), 3) + Poly(rng.complex()) * c.z(0) * c.z(1) + Poly(rng.complex());
    auto d = deform_by_bivector(c, dzdz.map([&](const Poly& q) { return q * f; }));
    GCField j = GCField::validate(d.j);
    auto r = brane_check(j, identity_embedding(4));
    REQUIRE(r.compatible);
    CHECK(r.space_filling);
    CHECK(d.j.block(4, 0, 4, 4).is_zero());
    REQUIRE(r.induced_j.has_value());
    CHECK(*r.induced_j * *r.induced_j == -PMatrix::identity(4));
    PForm p = bivector_field(j.poisson());
    CHECK(schouten(p, p).is_zero());
  }
}

TEST_CASE("B-field covariance of pullbacks and branes") {
  Rng rng(233);
  CMatrix w = standard_symplectic(2);
  const Complex o(0), l(1);
  for (int rep = 0; rep < 4; ++rep) {
    PMatrix b = to_poly(testing_support::random_antisymmetric(rng, 4));
    PMatrix t = b_transform_matrix(b);
    PMatrix tinv = b_transform_matrix(-b);
    for (const auto& jm : {to_poly(j_symplectic(w)), to_poly(j_complex(standard_complex(2)))}) {
      GCField j = GCField::validate(jm);
      GCField jb = GCField::validate(t * jm * tinv);
      for (const auto& dirs : std::vector<std::vector<CVector>>{{{l, o, o, o}, {o, o, l, o}},
                                                                 {{l, o, o, o}, {o, l, o, o}}}) {
        auto s = SubmanifoldData::affine(CVector(4, o), dirs);
        auto s_b = SubmanifoldData::affine(CVector(4, o), dirs, s.tangent.transpose() * b * s.tangent);
        auto r = brane_check(j, s);
        auto rb = brane_check(jb, s_b);
        CHECK(r.compatible == rb.compatible);
        CHECK(r.delta_rank == rb.delta_rank);
        if (r.compatible) CHECK(r.coisotropic);
      }
    }
    // e^B L pulls back to e^{ι*B} ι*L
    PMatrix c0 = closed_two_form(rng, 4);
    auto s = surface();
    std::vector<PSection> lb;
    for (const auto& e : graph_of(c0)) lb.push_back(PSection::from_flat(t * e.flat()));
    PMatrix ib = s.tangent.transpose() * s.restrict(b) * s.tangent;
    std::vector<PSection> shifted;
    for (const auto& e : pullback_dirac(graph_of(c0), s).frame) {
      shifted.push_back(PSection::from_flat(b_transform_matrix(ib) * e.flat()));
    }
    auto pb = pullback_dirac(lb, s);
    CHECK(same_dirac(pb.frame, shifted));
    CHECK(pb.tensor.empty());
  }
}
