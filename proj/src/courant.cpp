#include "gcg/courant.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "gcg/sparse.hpp"

namespace gcg {

namespace {

const Complex kHalf(Rational(1, 2));

std::string point_str(std::span<const Complex> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + p[i].str();
  return s + ")";
}

bool is_zero_vec(const PVector& v) {
  for (const auto& c : v) {
    if (!c.is_zero()) return false;
  }
  return true;
}

PForm apply_to_coeffs(const PVector& x, const PForm& phi) {
  return phi.map_coeffs([&](const Poly& p) { return apply_vector(x, p); });
}

bool has_twist(const PForm& h) { return h.dim() != 0 && !h.is_zero(); }

PVector mat_vec(const PMatrix& m, const PVector& v) { return m * v; }

// Coefficient matching for sum_k x_k cols[k] = target, several blocks of
// forms per unknown.
struct FormSystem {
  using Key = std::tuple<int, Mask, Monomial>;
  std::map<Key, SparseSystem::Row> rows;
  std::map<Key, Complex> rhs;

  void add_column(int k, int block, const PForm& f) {
    for (const auto& [mask, p] : f.terms()) {
      for (const auto& [mono, c] : p.terms()) rows[{block, mask, mono}][k] += c;
    }
  }
  void add_target(int block, const PForm& f) {
    for (const auto& [mask, p] : f.terms()) {
      for (const auto& [mono, c] : p.terms()) {
        rhs[{block, mask, mono}] += c;
        rows[{block, mask, mono}];
      }
    }
  }
  SparseSystem solve(int unknowns) const {
    SparseSystem s(unknowns);
    for (const auto& [key, row] : rows) {
      auto it = rhs.find(key);
      s.add(row, it == rhs.end() ? Complex(0) : it->second);
    }
    return s;
  }
};

Poly monomial_poly(int m, const Monomial& mono) { return Poly::monomial(m, mono, Complex(1)); }

// Section with a single unit polynomial in the given slot.
PForm slot_action(int slot, const Poly& mono, const PForm& phi) {
  const int m = phi.dim();
  if (slot < m) return contract_basis(slot, phi) * mono;
  return wedge(PForm::generator(m, slot - m), phi) * mono;
}

PSection section_from_solution(int m, const std::vector<Monomial>& monos, const std::vector<Complex>& x) {
  PSection s(m);
  const int nm = static_cast<int>(monos.size());
  for (int slot = 0; slot < 2 * m; ++slot) {
    Poly p;
    for (int i = 0; i < nm; ++i) {
      const Complex& c = x[slot * nm + i];
      if (!c.is_zero()) p += Poly::monomial(m, monos[i], c);
    }
    (slot < m ? s.vec[slot] : s.covec[slot - m]) = p;
  }
  return s;
}

int max_coeff_degree(const PForm& f) {
  int d = 0;
  for (const auto& [mask, p] : f.terms()) d = std::max(d, p.degree());
  return d;
}

std::vector<Point> default_samples(int m) {
  std::vector<Point> pts;
  pts.push_back(Point(m, Complex(0)));
  for (int i = 0; i < m; ++i) {
    Point p(m, Complex(0));
    p[i] = Complex(1);
    pts.push_back(p);
  }
  pts.push_back(Point(m, Complex(1)));
  Point q(m);
  for (int i = 0; i < m; ++i) q[i] = Complex(Rational(i + 2, 3));
  pts.push_back(q);
  return pts;
}

std::optional<CForm> pointwise_residual(const CForm& phi, const CForm& target) {
  const int m = phi.dim();
  std::map<Mask, SparseSystem::Row> rows;
  std::vector<CForm> cols;
  for (int j = 0; j < m; ++j) cols.push_back(contract_basis(j, phi));
  for (int j = 0; j < m; ++j) cols.push_back(wedge(CForm::generator(m, j), phi));
  for (int k = 0; k < 2 * m; ++k) {
    for (const auto& [mask, c] : cols[k].terms()) rows[mask][k] += c;
  }
  for (const auto& [mask, c] : target.terms()) rows[mask];
  SparseSystem s(2 * m);
  for (const auto& [mask, row] : rows) s.add(row, target.coeff(mask));
  if (s.consistent()) return std::nullopt;
  auto x = s.best_effort();
  CForm r = target;
  for (int k = 0; k < 2 * m; ++k) {
    if (!x[k].is_zero()) r -= cols[k] * x[k];
  }
  return r;
}

}  // namespace

// ---- chart ----

Chart::Chart(std::vector<std::string> names, std::vector<std::pair<int, int>> pairs,
             std::vector<std::string> complex_names)
    : names_(std::move(names)), pairs_(std::move(pairs)), complex_names_(std::move(complex_names)) {
  check_dim(dim());
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) throw ValidationError("duplicate chart variable '" + n + "'");
  }
  std::set<int> used;
  for (auto [a, b] : pairs_) {
    if (a < 0 || b < 0 || a >= dim() || b >= dim() || a == b) throw ValidationError("complex pair out of range");
    if (!used.insert(a).second || !used.insert(b).second) {
      throw ValidationError("complex pairing must use each real variable at most once");
    }
  }
  if (complex_names_.empty()) {
    for (std::size_t j = 0; j < pairs_.size(); ++j) complex_names_.push_back("z" + std::to_string(j + 1));
  }
  if (complex_names_.size() != pairs_.size()) throw ValidationError("one complex name per pair");
  for (const auto& n : complex_names_) {
    if (!seen.insert(n).second || !seen.insert(n + "bar").second) {
      throw ValidationError("complex name '" + n + "' clashes with another variable");
    }
  }
}

Chart Chart::real(int m) {
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("x" + std::to_string(i + 1));
  return Chart(names);
}

Chart Chart::complex(int n) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < n; ++j) {
    names.push_back("x" + std::to_string(j + 1));
    names.push_back("y" + std::to_string(j + 1));
    pairs.emplace_back(2 * j, 2 * j + 1);
  }
  return Chart(names, pairs);
}

Poly Chart::var(int i) const { return Poly::var(dim(), i); }
Poly Chart::z(int j) const { return var(pairs_.at(j).first) + Complex::i() * var(pairs_.at(j).second); }
Poly Chart::zbar(int j) const { return var(pairs_.at(j).first) - Complex::i() * var(pairs_.at(j).second); }

PForm Chart::dz(int j) const {
  PForm f(dim());
  f.add(Mask{1} << pairs_.at(j).first, Poly(1));
  f.add(Mask{1} << pairs_.at(j).second, Poly(Complex::i()));
  return f;
}

PForm Chart::dzbar(int j) const { return dz(j).conj(); }

PVector Chart::d_dz(int j) const {
  PVector v(dim(), Poly(0));
  v[pairs_.at(j).first] = Poly(kHalf);
  v[pairs_.at(j).second] = Poly(Complex(0, Rational(-1, 2)));
  return v;
}

PVector Chart::d_dzbar(int j) const {
  PVector v = d_dz(j);
  for (auto& c : v) c = c.conj();
  return v;
}

PForm Chart::holomorphic_volume() const {
  PForm f = PForm::scalar(dim(), Poly(1));
  for (int j = 0; j < complex_dim(); ++j) f = wedge(f, dz(j));
  return f;
}

Poly Chart::parse(const std::string& text) const {
  std::vector<std::string> all = names_;
  for (const auto& n : complex_names_) all.push_back(n);
  for (const auto& n : complex_names_) all.push_back(n + "bar");
  if (static_cast<int>(all.size()) > kMaxVars) {
    // Too many symbols for one parse: fall back to real names only.
    return parse_poly(text, names_).with_nvars(dim());
  }
  Poly raw = parse_poly(text, all);
  std::vector<Poly> images;
  for (int i = 0; i < dim(); ++i) images.push_back(var(i));
  for (int j = 0; j < complex_dim(); ++j) images.push_back(z(j));
  for (int j = 0; j < complex_dim(); ++j) images.push_back(zbar(j));
  if (raw.nvars() == 0) return raw.with_nvars(dim());
  images.resize(raw.nvars());
  return raw.substitute(images).with_nvars(dim());
}

Point Chart::point_from_complex(const std::vector<Complex>& zs) const {
  if (static_cast<int>(zs.size()) != complex_dim() || 2 * complex_dim() != dim()) {
    throw DimensionError("complex point needs one value per complex coordinate on a fully paired chart");
  }
  Point p(dim());
  for (int j = 0; j < complex_dim(); ++j) {
    p[pairs_[j].first] = Complex(zs[j].re());
    p[pairs_[j].second] = Complex(zs[j].im());
  }
  return p;
}

// ---- conversions ----

CForm eval(const PForm& phi, std::span<const Complex> p) {
  CForm r(phi.dim(), phi.variance());
  for (const auto& [mask, c] : phi.terms()) r.add(mask, c.eval(p));
  return r;
}

CGenVector eval(const PSection& s, std::span<const Complex> p) {
  return CGenVector(eval(s.vec, p), eval(s.covec, p));
}

PForm to_poly(const CForm& phi) {
  PForm r(phi.dim(), phi.variance());
  for (const auto& [mask, c] : phi.terms()) r.add(mask, Poly(c));
  return r;
}

PSection to_poly(const CGenVector& v) {
  PSection s(v.dim());
  for (int i = 0; i < v.dim(); ++i) {
    s.vec[i] = Poly(v.vec[i]);
    s.covec[i] = Poly(v.covec[i]);
  }
  return s;
}

PSection section(const PVector& x, const PVector& xi) { return PSection(x, xi); }

PVector linear_part(const PForm& f) {
  PVector v(f.dim(), Poly(0));
  for (int i = 0; i < f.dim(); ++i) v[i] = f.coeff(Mask{1} << i);
  return v;
}

// ---- calculus ----

Poly apply_vector(const PVector& x, const Poly& f) {
  Poly r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_zero()) r += x[i] * f.derivative(static_cast<int>(i));
  }
  return r;
}

PVector lie_bracket(const PVector& x, const PVector& y) {
  if (x.size() != y.size()) throw DimensionError("vector fields of different dimension");
  PVector r(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) r[j] = apply_vector(x, y[j]) - apply_vector(y, x[j]);
  return r;
}

PForm exterior_d(const PForm& phi) {
  const int m = phi.dim();
  PForm r(m, phi.variance());
  for (int i = 0; i < m; ++i) {
    PForm di = phi.map_coeffs([i](const Poly& p) { return p.derivative(i); });
    if (!di.is_zero()) r += wedge(PForm::generator(m, i, phi.variance()), di);
  }
  return r;
}

PForm d_H(const PForm& phi, const PForm& h) {
  PForm r = exterior_d(phi);
  if (has_twist(h)) r += wedge(h, phi);
  return r;
}

PForm lie_derivative(const PVector& x, const PForm& phi) {
  return exterior_d(contract(x, phi)) + contract(x, exterior_d(phi));
}

PForm differential(const Poly& f, int m) { return exterior_d(PForm::scalar(m, f)); }

ClosedThreeForm ClosedThreeForm::validate(const PForm& h) {
  for (const auto& [mask, c] : h.terms()) {
    if (popcount(mask) != 3) throw ValidationError("twist H must be a pure 3-form");
  }
  for (const auto& [mask, c] : h.terms()) {
    if (!(c == c.conj())) throw ValidationError("twist H must be real");
  }
  PForm dh = exterior_d(h);
  if (!dh.is_zero()) throw ValidationError("twist H is not closed: dH has " + std::to_string(dh.terms().size()) + " nonzero terms");
  ClosedThreeForm r;
  r.h_ = h;
  return r;
}

ClosedThreeForm ClosedThreeForm::zero(int m) {
  ClosedThreeForm r;
  r.h_ = PForm(m);
  return r;
}

PSection courant_bracket(const PSection& a, const PSection& b, const PForm& h) {
  a.check(b);
  const int m = a.dim();
  PSection r(m);
  r.vec = lie_bracket(a.vec, b.vec);
  PForm eta = PForm::linear(b.covec);
  PForm xi = PForm::linear(a.covec);
  PForm c = lie_derivative(a.vec, eta) - contract(b.vec, exterior_d(xi));
  if (has_twist(h)) c += contract(a.vec, contract(b.vec, h));
  r.covec = linear_part(c);
  return r;
}

PForm derived_bracket_act(const PSection& a, const PSection& b, const PForm& h, const PForm& phi) {
  auto d1 = [&](const PForm& psi) { return d_H(clifford_act(a, psi), h) + clifford_act(a, d_H(psi, h)); };
  return d1(clifford_act(b, phi)) - clifford_act(b, d1(phi));
}

DiracFrame DiracFrame::validate(std::vector<PSection> sections, std::vector<Point> samples) {
  if (sections.empty()) throw ValidationError("empty frame");
  const int m = sections.front().dim();
  if (static_cast<int>(sections.size()) != m) {
    throw ValidationError("a Dirac frame needs " + std::to_string(m) + " sections, got " + std::to_string(sections.size()));
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      Poly p = pairing(sections[i], sections[j]);
      if (!p.is_zero()) {
        throw ValidationError("sections " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                              " are not orthogonal: 2<e,e'> = " + p.str());
      }
    }
  }
  for (const auto& p : samples) {
    std::vector<CVector> rows;
    for (const auto& s : sections) rows.push_back(eval(s, p).flat());
    if (rank(CMatrix::from_rows(rows)) != m) throw ValidationError("frame drops rank at " + point_str(p));
  }
  return DiracFrame{std::move(sections), std::move(samples)};
}

std::vector<TensorEntry> involutivity_tensor(const std::vector<PSection>& frame, const PForm& h) {
  std::vector<TensorEntry> out;
  const int n = static_cast<int>(frame.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      PSection br = courant_bracket(frame[i], frame[j], h);
      for (int k = j + 1; k < n; ++k) {
        Poly v = inner(br, frame[k]);
        if (!v.is_zero()) out.push_back({i, j, k, v});
      }
    }
  }
  return out;
}

std::vector<Monomial> monomials_up_to(int n, int d) {
  std::vector<Monomial> out;
  Monomial cur;
  auto rec = [&](auto&& self, int var, int left) -> void {
    if (var == n) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur.exp[var] = static_cast<std::uint16_t>(e);
      self(self, var + 1, left - e);
    }
    cur.exp[var] = 0;
  };
  rec(rec, 0, d);
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a < b;
  });
  return out;
}

int default_degree_bound(const PForm& phi, const PForm& h) {
  return max_coeff_degree(phi) + (has_twist(h) ? max_coeff_degree(h) : 0) + 1;
}

IntegrabilityResult check_spinor_integrability(const PForm& phi, const PForm& h,
                                               const std::optional<PSection>& witness,
                                               std::optional<int> degree_bound,
                                               const std::vector<Point>& samples) {
  if (phi.is_zero()) throw ValidationError("the zero form does not define a spinor line");
  const int m = phi.dim();
  for (const auto& p : samples) {
    if (!null_space(eval(phi, p)).pure) throw ValidationError("form is not pure at sample point " + point_str(p));
  }
  IntegrabilityResult res;
  res.degree_bound = degree_bound ? *degree_bound : default_degree_bound(phi, h);
  const PForm target = d_H(phi, h);
  const PForm phibar = phi.conj();

  if (witness) {
    PForm r = target - clifford_act(*witness, phi);
    if (r.is_zero()) {
      res.verdict = IntegrabilityResult::Verdict::pass;
      res.witness = *witness;
      res.witness_in_conjugate = clifford_act(*witness, phibar).is_zero();
      res.residual = r;
      return res;
    }
    res.supplied_witness_failed = true;
  }

  const auto monos = monomials_up_to(m, res.degree_bound);
  const int nm = static_cast<int>(monos.size());
  const int unknowns = 2 * m * nm;
  FormSystem sys;
  FormSystem constrained;
  for (int slot = 0; slot < 2 * m; ++slot) {
    for (int i = 0; i < nm; ++i) {
      Poly mono = monomial_poly(m, monos[i]);
      PForm col = slot_action(slot, mono, phi);
      sys.add_column(slot * nm + i, 0, col);
      constrained.add_column(slot * nm + i, 0, col);
      constrained.add_column(slot * nm + i, 1, slot_action(slot, mono, phibar));
    }
  }
  sys.add_target(0, target);
  constrained.add_target(0, target);

  SparseSystem cs = constrained.solve(unknowns);
  if (auto x = cs.solution()) {
    res.verdict = IntegrabilityResult::Verdict::pass;
    res.witness = section_from_solution(m, monos, *x);
    res.witness_in_conjugate = true;
    res.residual = PForm(m);
    return res;
  }
  SparseSystem us = sys.solve(unknowns);
  if (auto x = us.solution()) {
    res.verdict = IntegrabilityResult::Verdict::pass;
    res.witness = section_from_solution(m, monos, *x);
    res.residual = PForm(m);
    return res;
  }
  res.witness = section_from_solution(m, monos, us.best_effort());
  res.residual = target - clifford_act(res.witness, phi);

  const std::vector<Point> pts = samples.empty() ? default_samples(m) : samples;
  for (const auto& p : pts) {
    CForm phip = eval(phi, p);
    if (samples.empty() && !null_space(phip).pure) continue;
    if (auto r = pointwise_residual(phip, eval(target, p))) {
      res.verdict = IntegrabilityResult::Verdict::inconsistent;
      res.point = p;
      res.point_residual = *r;
      return res;
    }
  }
  res.verdict = IntegrabilityResult::Verdict::bound_exhausted;
  return res;
}

// ---- structure fields ----

std::optional<std::string> GCField::violation(const PMatrix& j) {
  if (!j.is_square() || j.rows() % 2 != 0) return "shape: J must be a 2m x 2m matrix";
  const int m = j.rows() / 2;
  check_dim(m);
  auto pos = [](int a, int b) { return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")"; };
  for (int a = 0; a < j.rows(); ++a) {
    for (int b = 0; b < j.cols(); ++b) {
      if (!(j(a, b) == j(a, b).conj())) return "reality: entry " + pos(a, b) + " is not real";
    }
  }
  PMatrix sq = j * j;
  for (int a = 0; a < j.rows(); ++a) {
    for (int b = 0; b < j.cols(); ++b) {
      Poly want = a == b ? Poly(-1) : Poly(0);
      if (!(sq(a, b) - want).is_zero()) {
        return "J^2 = -1: entry " + pos(a, b) + " of J^2 is " + sq(a, b).str();
      }
    }
  }
  PMatrix g = to_poly(gram(m));
  PMatrix o = j.transpose() * g * j;
  for (int a = 0; a < j.rows(); ++a) {
    for (int b = 0; b < j.cols(); ++b) {
      if (!(o(a, b) - g(a, b)).is_zero()) {
        return "orthogonality: entry " + pos(a, b) + " of J^T G J is " + o(a, b).str() + " but G has " +
               g(a, b).str();
      }
    }
  }
  return std::nullopt;
}

GCField GCField::validate(const PMatrix& j) {
  if (auto v = violation(j)) throw ValidationError("not a generalized almost complex structure: " + *v);
  GCField f;
  f.j_ = j;
  return f;
}

GCStructure GCField::at(std::span<const Complex> p) const { return GCStructure::validate(eval(j_, p)); }

PMatrix GCField::poisson() const { return j_.block(0, dim(), dim(), dim()).transpose(); }

PSection GCField::apply(const PSection& v) const { return PSection::from_flat(mat_vec(j_, v.flat())); }

std::vector<PSection> GCField::eigenframe() const {
  const int n = 2 * dim();
  PMatrix shifted = j_ - to_poly(Complex::i() * CMatrix::identity(n));
  auto ker = poly_kernel(shifted);
  if (static_cast<int>(ker.size()) != dim()) throw DomainError("eigenbundle frame has the wrong generic rank");
  std::vector<PSection> out;
  for (const auto& v : ker) out.push_back(PSection::from_flat(v));
  return out;
}

PMatrix j_symplectic_field(const PMatrix& omega) {
  if (!omega.is_antisymmetric()) throw ValidationError("symplectic form must be antisymmetric");
  const int m = omega.rows();
  PMatrix w = omega.transpose();
  Poly dt = det(w);
  if (dt.is_zero() || !dt.is_constant()) {
    throw DomainError("omega needs a constant nonzero determinant for a polynomial inverse, got " + dt.str());
  }
  Poly inv_det(dt.constant_value().inverse());
  PMatrix winv = adjugate(w);
  PMatrix j(2 * m, 2 * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      j(a, m + b) = -(winv(a, b) * inv_det);
      j(m + a, b) = w(a, b);
    }
  }
  return j;
}

std::vector<NijenhuisEntry> nijenhuis_field(const GCField& s, const PForm& h) {
  const int m = s.dim();
  std::vector<PSection> basis;
  for (int a = 0; a < 2 * m; ++a) {
    PVector flat(2 * m, Poly(0));
    flat[a] = Poly(1);
    basis.push_back(PSection::from_flat(flat));
  }
  std::vector<NijenhuisEntry> out;
  for (int a = 0; a < 2 * m; ++a) {
    PSection ja = s.apply(basis[a]);
    for (int b = 0; b < 2 * m; ++b) {
      PSection jb = s.apply(basis[b]);
      PSection n = courant_bracket(ja, jb, h) - s.apply(courant_bracket(ja, basis[b], h)) -
                   s.apply(courant_bracket(basis[a], jb, h)) - courant_bracket(basis[a], basis[b], h);
      if (!n.is_zero()) out.push_back({a, b, n});
    }
  }
  return out;
}

// ---- Lie algebroids ----

LieAlgebroid LieAlgebroid::tangent(int m) {
  LieAlgebroid a;
  a.rank = m;
  a.base_dim = m;
  for (int i = 0; i < m; ++i) {
    PVector v(m, Poly(0));
    v[i] = Poly(1);
    a.anchor.push_back(v);
  }
  a.structure.assign(m, std::vector<PVector>(m, PVector(m, Poly(0))));
  return a;
}

PForm algebroid_d(const LieAlgebroid& a, const PForm& mu) {
  const int r = a.rank;
  PForm out(r, mu.variance());
  for (int i = 0; i < r; ++i) {
    PForm di = apply_to_coeffs(a.anchor[i], mu);
    if (!di.is_zero()) out += wedge(PForm::generator(r, i, mu.variance()), di);
  }
  for (int x = 0; x < r; ++x) {
    for (int y = x + 1; y < r; ++y) {
      for (int c = 0; c < r; ++c) {
        const Poly& f = a.structure[x][y][c];
        if (f.is_zero()) continue;
        // -½ Σ_{x,y} c_xy^c ε^x∧ε^y∧ι_c with c_yx = -c_xy
        PForm t = wedge(PForm::monomial(r, (Mask{1} << x) | (Mask{1} << y), Poly(1), mu.variance()),
                        contract_basis(c, mu));
        out -= t * f;
      }
    }
  }
  return out;
}

namespace {

// [f b_x, g b_y] as a degree-one element.
PForm section_bracket(const LieAlgebroid& a, int x, const Poly& f, int y, const Poly& g, Variance v) {
  const int r = a.rank;
  PForm out(r, v);
  for (int c = 0; c < r; ++c) {
    Poly s = a.structure[x][y][c];
    if (!s.is_zero()) out.add(Mask{1} << c, f * g * s);
  }
  out.add(Mask{1} << y, f * apply_vector(a.anchor[x], g));
  out.add(Mask{1} << x, -(g * apply_vector(a.anchor[y], f)));
  return out;
}

std::vector<int> bits_of(Mask m) {
  std::vector<int> b;
  for (int i = 0; m; ++i, m >>= 1) {
    if (m & 1) b.push_back(i);
  }
  return b;
}

PForm product_of(int r, const std::vector<int>& idx, std::size_t skip, Variance v) {
  PForm f = PForm::scalar(r, Poly(1), v);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k != skip) f = wedge(f, PForm::generator(r, idx[k], v));
  }
  return f;
}

// [f e^I, g] with g a function.
PForm bracket_with_function(const LieAlgebroid& a, const Poly& f, Mask im, const Poly& g, Variance v) {
  const int r = a.rank;
  auto idx = bits_of(im);
  const int p = static_cast<int>(idx.size());
  PForm out(r, v);
  for (int k = 0; k < p; ++k) {
    Poly xg = apply_vector(a.anchor[idx[k]], g);
    if (xg.is_zero()) continue;
    // sign (-1)^{p-k} for 1-based k
    PForm t = product_of(r, idx, k, v) * (f * xg);
    if ((p - (k + 1)) % 2) t = -t;
    out += t;
  }
  return out;
}

}  // namespace

PForm algebroid_bracket(const LieAlgebroid& a, const PForm& p, const PForm& q) {
  p.check_compatible(q);
  const int r = a.rank;
  const Variance v = p.variance();
  PForm out(r, v);
  for (const auto& [im, f] : p.terms()) {
    for (const auto& [jm, g] : q.terms()) {
      const int pd = popcount(im), qd = popcount(jm);
      if (pd == 0 && qd == 0) continue;
      if (qd == 0) {
        out += bracket_with_function(a, f, im, g, v);
        continue;
      }
      if (pd == 0) {
        PForm t = bracket_with_function(a, g, jm, f, v);
        out += (qd % 2) ? -t : t;
        continue;
      }
      auto ii = bits_of(im);
      auto jj = bits_of(jm);
      for (int k = 0; k < pd; ++k) {
        for (int l = 0; l < qd; ++l) {
          Poly fk = k == 0 ? f : Poly(1);
          Poly gl = l == 0 ? g : Poly(1);
          PForm br = section_bracket(a, ii[k], fk, jj[l], gl, v);
          if (br.is_zero()) continue;
          Poly rest(1);
          if (k != 0) rest = rest * f;
          if (l != 0) rest = rest * g;
          PForm t = wedge(wedge(br, product_of(r, ii, k, v)), product_of(r, jj, l, v)) * rest;
          if ((k + l) % 2) t = -t;
          out += t;
        }
      }
    }
  }
  return out;
}

PForm bivector_field(const PMatrix& beta) { return two_form_from_matrix<Poly>(beta, Variance::multivector); }

PForm schouten(const PForm& a, const PForm& b) {
  if (a.variance() != Variance::multivector) throw DimensionError("schouten bracket needs multivector fields");
  return algebroid_bracket(LieAlgebroid::tangent(a.dim()), a, b);
}

DiracPair make_dirac_pair(const std::vector<PSection>& l, const std::vector<PSection>& complement, const PForm& h,
                          const std::vector<Point>& samples) {
  const int m = l.empty() ? 0 : l.front().dim();
  if (static_cast<int>(l.size()) != m || static_cast<int>(complement.size()) != m) {
    throw ValidationError("both frames need exactly m sections");
  }
  PMatrix g(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) g(a, b) = pairing(complement[a], l[b]);
  }
  Poly dt = det(g);
  if (dt.is_zero()) throw DomainError("frames are not transverse anywhere");
  if (!dt.is_constant()) {
    for (const auto& p : samples) {
      if (dt.eval(p).is_zero()) throw DomainError("frames are not transverse at " + point_str(p));
    }
    throw DomainError("pairing between the frames has non-constant determinant " + dt.str() +
                      "; dual frames would not be polynomial");
  }
  PMatrix ginv = adjugate(g);
  Poly inv_det(dt.constant_value().inverse());
  DiracPair dp;
  dp.l = l;
  dp.h = h;
  for (int a = 0; a < m; ++a) {
    PSection s(m);
    for (int c = 0; c < m; ++c) {
      Poly coef = ginv(a, c) * inv_det;
      if (!coef.is_zero()) s += coef * complement[c];
    }
    dp.dual.push_back(s);
  }
  auto check_dirac = [&](const std::vector<PSection>& f, const char* name) {
    DiracFrame::validate(f, samples);
    if (!involutivity_tensor(f, h).empty()) throw ValidationError(std::string(name) + " is not involutive");
  };
  check_dirac(l, "L");
  check_dirac(dp.dual, "the complement");

  auto build = [&](const std::vector<PSection>& f, const std::vector<PSection>& other) {
    LieAlgebroid a;
    a.rank = m;
    a.base_dim = m;
    for (const auto& s : f) a.anchor.push_back(s.vec);
    a.structure.assign(m, std::vector<PVector>(m, PVector(m, Poly(0))));
    for (int x = 0; x < m; ++x) {
      for (int y = 0; y < m; ++y) {
        PSection br = courant_bracket(f[x], f[y], h);
        for (int c = 0; c < m; ++c) a.structure[x][y][c] = pairing(br, other[c]);
      }
    }
    return a;
  };
  dp.algebroid_l = build(dp.l, dp.dual);
  dp.algebroid_dual = build(dp.dual, dp.l);
  return dp;
}

std::pair<std::vector<PSection>, std::vector<PSection>> complex_frames(const Chart& c) {
  const int n = c.complex_dim();
  const int m = c.dim();
  if (2 * n != m) throw ValidationError("complex frames need a fully paired chart");
  std::vector<PSection> l, comp;
  PVector zero(m, Poly(0));
  for (int j = 0; j < n; ++j) {
    l.push_back(PSection(c.d_dzbar(j), zero));
    comp.push_back(PSection(zero, linear_part(c.dzbar(j))));
  }
  for (int j = 0; j < n; ++j) {
    l.push_back(PSection(zero, linear_part(c.dz(j))));
    comp.push_back(PSection(c.d_dz(j), zero));
  }
  return {l, comp};
}

PForm lie_algebroid_differential(const DiracPair& p, const PForm& mu) { return algebroid_d(p.algebroid_l, mu); }

PForm lie_algebroid_bracket(const DiracPair& p, const PForm& a, const PForm& b) {
  return algebroid_bracket(p.algebroid_dual, a, b);
}

PForm dual_two_form(const DiracPair& p, const PMatrix& beta, const PMatrix& b) {
  const int m = static_cast<int>(p.l.size());
  PForm eps(m);
  for (int x = 0; x < m; ++x) {
    for (int y = x + 1; y < m; ++y) {
      const PSection& u = p.l[x];
      const PSection& w = p.l[y];
      Poly v = dot(u.covec, beta * w.covec) + dot(u.vec, b * w.vec);
      eps.add((Mask{1} << x) | (Mask{1} << y), v);
    }
  }
  return eps;
}

std::vector<PSection> graph_frame(const DiracPair& p, const PForm& eps) {
  const int m = static_cast<int>(p.l.size());
  std::vector<PSection> out;
  for (int x = 0; x < m; ++x) {
    PSection s = p.l[x];
    for (int y = 0; y < m; ++y) {
      if (x == y) continue;
      Poly c = eps.coeff((Mask{1} << x) | (Mask{1} << y));
      if (c.is_zero()) continue;
      s += (x < y ? c : -c) * p.dual[y];
    }
    out.push_back(s);
  }
  return out;
}

MaurerCartanResult maurer_cartan(const DiracPair& p, const PForm& eps) {
  MaurerCartanResult r;
  r.d_eps = lie_algebroid_differential(p, eps);
  r.bracket = lie_algebroid_bracket(p, eps, eps);
  r.residual = r.d_eps + r.bracket * Poly(kHalf);
  r.pass = r.residual.is_zero();
  return r;
}

// ---- deformations ----

Deformation deform_by_bivector(const Chart& c, const PMatrix& beta) {
  const int m = c.dim();
  const int n = c.complex_dim();
  if (2 * n != m) throw ValidationError("deformation needs a fully paired complex chart");
  if (!beta.is_antisymmetric()) throw ValidationError("beta is not antisymmetric");
  for (int j = 0; j < n; ++j) {
    PVector w = contract_two(beta, linear_part(c.dzbar(j)));
    if (!is_zero_vec(w)) throw ValidationError("beta is not of type (2,0): it pairs with dzbar" + std::to_string(j + 1));
  }
  PMatrix jj(2 * m, 2 * m);
  for (auto [a, b] : c.pairs()) {
    // J ∂x = ∂y on vectors; J_J = [[-J, 0], [0, J^T]]
    jj(b, a) = Poly(-1);
    jj(a, b) = Poly(1);
    jj(m + a, m + b) = Poly(1);
    jj(m + b, m + a) = Poly(-1);
  }
  PMatrix q = beta.map([](const Poly& p) { return p + p.conj(); });
  PMatrix fwd = PMatrix::identity(2 * m);
  PMatrix back = PMatrix::identity(2 * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      fwd(a, m + b) = q(b, a);
      back(a, m + b) = -q(b, a);
    }
  }
  Deformation d;
  d.j = fwd * jj * back;
  d.spinor = beta_exp_act(beta, c.holomorphic_volume());
  return d;
}

GCStructure deform_point(const GCStructure& s, const CMatrix& eps) {
  const int m = s.dim();
  if (eps.rows() != m || eps.cols() != m || !eps.is_antisymmetric()) {
    throw ValidationError("epsilon must be an antisymmetric m x m matrix on the eigenbundle basis");
  }
  auto l = eigenbundle(s).basis();
  std::vector<CGenVector> lbar;
  for (const auto& u : l) lbar.push_back(u.conj());
  CMatrix g(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) g(a, b) = pairing(lbar[a], l[b]);
  }
  CMatrix ginv = inverse(g);
  std::vector<CGenVector> dual;
  for (int a = 0; a < m; ++a) {
    CGenVector d(m);
    for (int c = 0; c < m; ++c) d += ginv(a, c) * lbar[c];
    dual.push_back(d);
  }
  std::vector<CGenVector> le;
  for (int a = 0; a < m; ++a) {
    CGenVector u = l[a];
    for (int b = 0; b < m; ++b) u += eps(a, b) * dual[b];
    le.push_back(u);
  }
  CMatrix t(2 * m, 2 * m);
  for (int a = 0; a < m; ++a) {
    auto f = le[a].flat();
    for (int r = 0; r < 2 * m; ++r) {
      t(r, a) = f[r];
      t(r, m + a) = f[r].conj();
    }
  }
  if (det(t).is_zero()) throw DomainError("A_eps is singular: the deformed subspace meets its conjugate");
  CMatrix dg(2 * m, 2 * m);
  for (int a = 0; a < m; ++a) {
    dg(a, a) = Complex::i();
    dg(m + a, m + a) = -Complex::i();
  }
  return GCStructure::validate(t * dg * inverse(t));
}

PVector modular_vector_field(const PForm& beta, const PForm& volume, const Poly& log_factor, int degree_bound) {
  const int m = beta.dim();
  PForm bb = schouten(beta, beta);
  if (!bb.is_zero()) throw ValidationError("beta is not Poisson: [beta, beta] has " + std::to_string(bb.terms().size()) + " nonzero terms");
  if (volume.dim() != m || volume.is_zero()) throw ValidationError("volume form must be a nonzero top form");
  for (const auto& [mask, c] : volume.terms()) {
    if (mask != full_mask(m)) throw ValidationError("volume form must be of top degree");
  }
  PForm phi = beta_exp_act(two_form_matrix(beta), volume);
  PForm target = exterior_d(phi) + wedge(differential(log_factor, m), phi);
  const auto monos = monomials_up_to(m, degree_bound);
  const int nm = static_cast<int>(monos.size());
  FormSystem sys;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < nm; ++i) sys.add_column(j * nm + i, 0, contract_basis(j, phi) * monomial_poly(m, monos[i]));
  }
  sys.add_target(0, target);
  auto x = sys.solve(m * nm).solution();
  if (!x) throw DomainError("no polynomial modular vector field of degree <= " + std::to_string(degree_bound));
  PVector out(m, Poly(0));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < nm; ++i) {
      if (!(*x)[j * nm + i].is_zero()) out[j] += Poly::monomial(m, monos[i], (*x)[j * nm + i]);
    }
  }
  return out;
}

HamiltonianResult hamiltonian_symmetry(const Poly& f, const GCField& s, const PForm& h) {
  const int m = s.dim();
  HamiltonianResult r;
  PVector zero(m, Poly(0));
  PSection dre(zero, linear_part(differential(f.real_part(), m)));
  PSection dim(zero, linear_part(differential(f.imag_part(), m)));
  r.df = dre - s.apply(dim);
  auto frame = s.eigenframe();
  for (int i = 0; i < m; ++i) {
    PSection br = courant_bracket(r.df, frame[i], h);
    for (int k = 0; k < m; ++k) {
      Poly v = pairing(br, frame[k]);
      if (!v.is_zero()) r.failures.push_back({i, -1, k, v});
    }
  }
  r.symmetry = r.failures.empty();
  return r;
}

}  // namespace gcg
