#include "gcg/isotropic.hpp"

#include <map>

namespace gcg {

namespace {

int common_dim(const std::vector<CGenVector>& vs) {
  if (vs.empty()) throw ValidationError("empty basis");
  const int m = vs[0].dim();
  check_dim(m);
  for (const auto& v : vs) {
    if (v.dim() != m) throw DimensionError("basis vectors of different dimension");
  }
  return m;
}

// Matrix whose columns are the given vectors.
CMatrix columns(const std::vector<CVector>& vs, int height) {
  CMatrix m(height, static_cast<int>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) {
    for (int i = 0; i < height; ++i) m(i, static_cast<int>(j)) = vs[j][i];
  }
  return m;
}

CVector combine(const std::vector<CVector>& vs, const CVector& coeffs, int width) {
  CVector r(width, Complex(0));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    for (int j = 0; j < width; ++j) r[j] += coeffs[i] * vs[i][j];
  }
  return r;
}

int first_nonzero(const CVector& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_zero()) return static_cast<int>(i);
  }
  return -1;
}

// Square matrix with the given vectors as its first columns, completed by
// standard basis vectors at the non-pivot columns.
CMatrix completed_basis(const std::vector<CVector>& reduced, int m) {
  std::vector<CVector> cols = reduced;
  for (int j : complement_columns(reduced, m)) {
    CVector e(m, Complex(0));
    e[j] = Complex(1);
    cols.push_back(e);
  }
  return columns(cols, m);
}

}  // namespace

std::vector<int> complement_columns(const std::vector<CVector>& reduced_rows, int width) {
  std::vector<bool> pivot(width, false);
  for (const auto& r : reduced_rows) {
    int p = first_nonzero(r);
    if (p >= 0) pivot[p] = true;
  }
  std::vector<int> out;
  for (int j = 0; j < width; ++j) {
    if (!pivot[j]) out.push_back(j);
  }
  return out;
}

CMatrix change_two_form_basis(const CMatrix& n, const CMatrix& q) { return q.transpose() * n * q; }

std::vector<CVector> flat_rows(const std::vector<CGenVector>& vs) {
  std::vector<CVector> rows;
  rows.reserve(vs.size());
  for (const auto& v : vs) rows.push_back(v.flat());
  return rows;
}

bool same_subspace(const std::vector<CGenVector>& a, const std::vector<CGenVector>& b) {
  const int width = a.empty() ? (b.empty() ? 0 : 2 * b[0].dim()) : 2 * a[0].dim();
  return same_span(flat_rows(a), flat_rows(b), width);
}

std::optional<IsotropyViolation> find_isotropy_violation(const std::vector<CGenVector>& basis) {
  const int m = common_dim(basis);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) {
      Complex v = inner(basis[i], basis[j]);
      if (!v.is_zero()) return IsotropyViolation{static_cast<int>(i), static_cast<int>(j), v, 0};
    }
  }
  int r = rank(CMatrix::from_rows(flat_rows(basis)));
  if (r != m) return IsotropyViolation{-1, -1, Complex(0), r};
  return std::nullopt;
}

MaxIsotropic MaxIsotropic::from_basis(const std::vector<CGenVector>& basis) {
  const int m = common_dim(basis);
  if (static_cast<int>(basis.size()) != m) {
    throw ValidationError("a maximal isotropic in dimension " + std::to_string(m) + " needs " + std::to_string(m) +
                          " basis vectors, got " + std::to_string(basis.size()));
  }
  if (auto bad = find_isotropy_violation(basis)) {
    if (bad->i >= 0) {
      throw ValidationError("basis vectors " + std::to_string(bad->i + 1) + " and " + std::to_string(bad->j + 1) +
                            " are not orthogonal: <v,w> = " + bad->value.str());
    }
    throw ValidationError("basis has rank " + std::to_string(bad->rank) + " < " + std::to_string(m));
  }
  MaxIsotropic l;
  l.dim_ = m;
  l.basis_ = basis;
  std::vector<CVector> xs, xis;
  for (const auto& v : basis) {
    xs.push_back(v.vec);
    xis.push_back(v.covec);
  }
  l.delta_ = row_space_basis(xs, m);
  CMatrix xcols = columns(xs, m);
  const int r = static_cast<int>(l.delta_.size());
  std::vector<CVector> eps_covectors;
  for (const auto& d : l.delta_) {
    auto c = solve(xcols, d);
    eps_covectors.push_back(combine(xis, *c, m));
  }
  l.eps_ = CMatrix(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) l.eps_(a, b) = dot(eps_covectors[a], l.delta_[b]);
  }
  std::vector<CVector> ann;
  for (const auto& c : kernel(xcols)) ann.push_back(combine(xis, c, m));
  l.ann_ = row_space_basis(ann, m);
  return l;
}

std::vector<CGenVector> MaxIsotropic::reconstruct() const {
  const int m = dim_;
  const int r = static_cast<int>(delta_.size());
  CMatrix q = inverse(completed_basis(delta_, m));
  std::vector<CGenVector> out;
  for (int a = 0; a < r; ++a) {
    CVector xi(m, Complex(0));
    for (int b = 0; b < r; ++b) {
      for (int j = 0; j < m; ++j) xi[j] += eps_(a, b) * q(b, j);
    }
    out.emplace_back(delta_[a], xi);
  }
  for (const auto& t : ann_) out.emplace_back(CVector(m, Complex(0)), t);
  return out;
}

bool MaxIsotropic::is_real() const { return same_subspace(basis_, conj().basis_); }

bool MaxIsotropic::contains(const CGenVector& v) const {
  return gcg::contains(flat_rows(basis_), v.flat(), 2 * dim_);
}

MaxIsotropic MaxIsotropic::conj() const {
  std::vector<CGenVector> b;
  for (const auto& v : basis_) b.push_back(v.conj());
  return from_basis(b);
}

bool operator==(const MaxIsotropic& a, const MaxIsotropic& b) {
  return a.dim_ == b.dim_ && same_subspace(a.basis_, b.basis_);
}

CForm pure_spinor(const MaxIsotropic& l) {
  const int m = l.dim();
  const int r = static_cast<int>(l.delta().size());
  CMatrix q = inverse(completed_basis(l.delta(), m));
  CMatrix n(m, m);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) n(a, b) = -l.eps()(a, b);
  }
  CForm b = two_form_from_matrix<Complex>(change_two_form_basis(n, q));
  CForm phi = wedge_exp(b);
  for (const auto& theta : l.annihilator()) phi = wedge(phi, CForm::linear(theta));
  return phi;
}

NullSpace null_space(const CForm& phi) {
  if (phi.is_zero()) throw ValidationError("the zero form has no null space");
  if (phi.variance() != Variance::form) throw DimensionError("null space needs a form");
  const int m = phi.dim();
  std::vector<CForm> images;
  for (int j = 0; j < m; ++j) images.push_back(contract_basis(j, phi));
  for (int j = 0; j < m; ++j) images.push_back(wedge(CForm::generator(m, j), phi));
  std::map<Mask, int> row_of;
  for (const auto& f : images) {
    for (const auto& [mask, c] : f.terms()) row_of.emplace(mask, 0);
  }
  int next = 0;
  for (auto& [mask, idx] : row_of) idx = next++;
  CMatrix a(next, 2 * m);
  for (int j = 0; j < 2 * m; ++j) {
    for (const auto& [mask, c] : images[j].terms()) a(row_of[mask], j) = c;
  }
  NullSpace ns;
  for (const auto& v : kernel(a)) ns.basis.push_back(CGenVector::from_flat(v));
  ns.pure = static_cast<int>(ns.basis.size()) == m;
  return ns;
}

MaxIsotropic null_space_isotropic(const CForm& phi) {
  NullSpace ns = null_space(phi);
  if (!ns.pure) {
    throw ValidationError("form is not pure: null space has dimension " + std::to_string(ns.basis.size()) +
                          " < " + std::to_string(phi.dim()));
  }
  return MaxIsotropic::from_basis(ns.basis);
}

bool proportional(const CForm& a, const CForm& b, Complex* ratio) {
  if (a.is_zero() || b.is_zero()) return false;
  if (a.dim() != b.dim() || a.terms().size() != b.terms().size()) return false;
  const auto& [mask, cb] = *b.terms().begin();
  Complex c = a.coeff(mask) / cb;
  if (c.is_zero()) return false;
  if (!(a == b * c)) return false;
  if (ratio) *ratio = c;
  return true;
}

CotangentGraph graph_over_cotangent(const MaxIsotropic& l) {
  const int m = l.dim();
  std::vector<CVector> xs, xis;
  for (const auto& v : l.basis()) {
    xs.push_back(v.vec);
    xis.push_back(v.covec);
  }
  CotangentGraph g;
  g.F = row_space_basis(xis, m);
  const int s = static_cast<int>(g.F.size());
  CMatrix xicols = columns(xis, m);
  std::vector<CVector> lifts;
  for (const auto& f : g.F) lifts.push_back(combine(xs, *solve(xicols, f), m));
  g.gamma = CMatrix(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) g.gamma(a, b) = dot(g.F[b], lifts[a]);
  }
  CMatrix q = inverse(completed_basis(g.F, m));
  CMatrix n(m, m);
  n.set_block(0, 0, g.gamma);
  g.beta = change_two_form_basis(n, q);
  CForm base = CForm::scalar(m, Complex(1));
  for (const auto& f : g.F) base = wedge(base, CForm::linear(f));
  g.spinor = beta_exp_act(g.beta, base);
  return g;
}

MaxIsotropic transform(const MaxIsotropic& l, const Transform& t) {
  std::vector<CGenVector> b;
  for (const auto& v : l.basis()) b.push_back(apply_transform(t, v));
  return MaxIsotropic::from_basis(b);
}

MaxIsotropic tensor_product(const MaxIsotropic& a, const MaxIsotropic& b) {
  const int m = a.dim();
  if (b.dim() != m) throw DimensionError("tensor product of isotropics of different dimension");
  CMatrix sys(m, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      sys(j, i) = a.basis()[i].vec[j];
      sys(j, m + i) = -b.basis()[i].vec[j];
    }
  }
  std::vector<CVector> rows;
  for (const auto& c : kernel(sys)) {
    CGenVector v(m);
    for (int i = 0; i < m; ++i) {
      v += c[i] * CGenVector(a.basis()[i].vec, a.basis()[i].covec);
      v += c[m + i] * CGenVector(CVector(m, Complex(0)), b.basis()[i].covec);
    }
    rows.push_back(v.flat());
  }
  std::vector<CGenVector> basis;
  for (const auto& r : row_space_basis(rows, 2 * m)) basis.push_back(CGenVector::from_flat(r));
  return MaxIsotropic::from_basis(basis);
}

MaxIsotropic transpose(const MaxIsotropic& l) {
  std::vector<CGenVector> b;
  for (const auto& v : l.basis()) b.push_back(v.transpose());
  return MaxIsotropic::from_basis(b);
}

int intersection_dim(const MaxIsotropic& a, const MaxIsotropic& b) {
  std::vector<CVector> all = flat_rows(a.basis());
  auto rb = flat_rows(b.basis());
  all.insert(all.end(), rb.begin(), rb.end());
  return 2 * a.dim() - static_cast<int>(row_space_basis(all, 2 * a.dim()).size());
}

MaxIsotropic graph_of_two_form(const CMatrix& b) {
  if (!b.is_antisymmetric()) throw ValidationError("2-form matrix is not antisymmetric");
  const int m = b.rows();
  std::vector<CGenVector> basis;
  for (int i = 0; i < m; ++i) {
    CGenVector v = CGenVector::basis_vector(m, i);
    v.covec = b.row(i);
    basis.push_back(v);
  }
  return MaxIsotropic::from_basis(basis);
}

MaxIsotropic graph_of_bivector(const CMatrix& beta) {
  if (!beta.is_antisymmetric()) throw ValidationError("bivector matrix is not antisymmetric");
  const int m = beta.rows();
  std::vector<CGenVector> basis;
  for (int i = 0; i < m; ++i) {
    CGenVector v = CGenVector::basis_covector(m, i);
    v.vec = beta.row(i);
    basis.push_back(v);
  }
  return MaxIsotropic::from_basis(basis);
}

MaxIsotropic distribution_plus_annihilator(int dim, const std::vector<CVector>& delta) {
  std::vector<CGenVector> basis;
  auto d = row_space_basis(delta, dim);
  for (const auto& x : d) basis.emplace_back(x, CVector(dim, Complex(0)));
  CMatrix rows = d.empty() ? CMatrix(0, dim) : CMatrix::from_rows(d);
  for (const auto& xi : kernel(rows)) basis.emplace_back(CVector(dim, Complex(0)), xi);
  return MaxIsotropic::from_basis(basis);
}

MaxIsotropic tangent_space(int dim) {
  std::vector<CGenVector> b;
  for (int i = 0; i < dim; ++i) b.push_back(CGenVector::basis_vector(dim, i));
  return MaxIsotropic::from_basis(b);
}

MaxIsotropic cotangent_space(int dim) {
  std::vector<CGenVector> b;
  for (int i = 0; i < dim; ++i) b.push_back(CGenVector::basis_covector(dim, i));
  return MaxIsotropic::from_basis(b);
}

}  // namespace gcg
