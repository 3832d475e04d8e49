#include "gcg/pullback.hpp"

#include <sstream>

#include "gcg/linalg.hpp"

namespace gcg {

namespace {

std::string point_str(std::span<const Complex> p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i].str();
  os << ")";
  return os.str();
}

bool is_zero_vec(const PVector& v) {
  for (const auto& c : v) {
    if (!c.is_zero()) return false;
  }
  return true;
}

int generic_rank(const std::vector<PVector>& rows, int width) {
  if (rows.empty()) return 0;
  PMatrix m(static_cast<int>(rows.size()), width);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < width; ++j) m(i, j) = rows[i][j];
  }
  return static_cast<int>(poly_echelon(m).pivot_rows.size());
}

int rank_at(const std::vector<PVector>& rows, int width, std::span<const Complex> p) {
  if (rows.empty()) return 0;
  CMatrix m(static_cast<int>(rows.size()), width);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < width; ++j) m(i, j) = rows[i][j].eval(p);
  }
  return rank(m);
}

// Default parameter samples: a few small integer points.
std::vector<Point> default_param_samples(int s) {
  std::vector<Point> pts;
  for (int t = -1; t <= 2; ++t) {
    Point p(s, Complex(0));
    for (int i = 0; i < s; ++i) p[i] = Complex((t + 2 * i) % 4 - 1);
    pts.push_back(p);
  }
  return pts;
}

PSection apply_matrix(const PMatrix& j, const PSection& v) { return PSection::from_flat(j * v.flat()); }

}  // namespace

SubmanifoldData SubmanifoldData::make(std::vector<Poly> embedding, int param_dim, PMatrix f, PForm h) {
  SubmanifoldData s;
  const int m = static_cast<int>(embedding.size());
  if (param_dim < 1 || param_dim > m) throw DimensionError("submanifold dimension must be in 1..m");
  if (m > kMaxVars) throw CapacityError("ambient dimension above " + std::to_string(kMaxVars));
  s.ambient_dim = m;
  s.dim = param_dim;
  for (auto& e : embedding) {
    if (e.nvars() > param_dim) throw DimensionError("embedding uses more parameters than declared");
    e = e.with_nvars(param_dim);
  }
  s.embedding = std::move(embedding);
  s.tangent = PMatrix(m, param_dim);
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < param_dim; ++a) s.tangent(i, a) = s.embedding[i].derivative(a);
  }

  // constant minor for the left inverse of dι
  std::vector<int> rows(param_dim);
  for (int i = 0; i < param_dim; ++i) rows[i] = i;
  bool found = false;
  while (true) {
    PMatrix minor(param_dim, param_dim);
    for (int r = 0; r < param_dim; ++r) {
      for (int a = 0; a < param_dim; ++a) minor(r, a) = s.tangent(rows[r], a);
    }
    Poly d = det(minor);
    if (!d.is_zero() && d.is_constant()) {
      found = true;
      break;
    }
    int k = param_dim - 1;
    while (k >= 0 && rows[k] == m - param_dim + k) --k;
    if (k < 0) break;
    ++rows[k];
    for (int r = k + 1; r < param_dim; ++r) rows[r] = rows[r - 1] + 1;
  }
  if (!found) throw ValidationError("embedding has no Jacobian minor with constant nonzero determinant");
  s.chart_rows = rows;

  s.conormal = poly_kernel(s.tangent.transpose());
  if (static_cast<int>(s.conormal.size()) != m - param_dim) {
    throw ValidationError("conormal frame has rank " + std::to_string(s.conormal.size()) + ", expected " +
                          std::to_string(m - param_dim));
  }

  if (f.rows() == 0) f = PMatrix(param_dim, param_dim);
  if (f.rows() != param_dim || f.cols() != param_dim) throw DimensionError("F must be an s×s matrix");
  if (!f.is_antisymmetric()) throw ValidationError("F is not antisymmetric");
  s.f = f.map([&](const Poly& p) { return p.nvars() == 0 ? p : p.with_nvars(param_dim); });
  if (h.dim() == 0) h = PForm(m);
  if (h.dim() != m) throw DimensionError("H lives on a different ambient dimension");
  for (const auto& [mask, c] : h.terms()) {
    if (popcount(mask) != 3) throw ValidationError("H must be a 3-form");
  }
  s.h = h;
  PForm gap = exterior_d(two_form_from_matrix<Poly>(s.f)) - pullback_form(s, h);
  if (!gap.is_zero()) throw ValidationError("dF != pullback of H");
  return s;
}

SubmanifoldData SubmanifoldData::affine(const CVector& p0, const std::vector<CVector>& directions, PMatrix f,
                                        PForm h) {
  const int m = static_cast<int>(p0.size());
  const int s = static_cast<int>(directions.size());
  std::vector<Poly> emb(m);
  for (int i = 0; i < m; ++i) {
    Poly e = Poly(p0[i]).with_nvars(s);
    for (int a = 0; a < s; ++a) {
      if (static_cast<int>(directions[a].size()) != m) throw DimensionError("direction of wrong length");
      e += Poly(directions[a][i]) * Poly::var(s, a);
    }
    emb[i] = e;
  }
  return make(std::move(emb), s, std::move(f), std::move(h));
}

Poly SubmanifoldData::restrict(const Poly& p) const {
  if (p.nvars() == 0) return p;
  if (p.nvars() != ambient_dim) throw DimensionError("polynomial is not on the ambient chart");
  return p.substitute(embedding);
}

PVector SubmanifoldData::restrict(const PVector& v) const {
  PVector r;
  r.reserve(v.size());
  for (const auto& c : v) r.push_back(restrict(c));
  return r;
}

PSection SubmanifoldData::restrict(const PSection& v) const { return PSection(restrict(v.vec), restrict(v.covec)); }

PMatrix SubmanifoldData::restrict(const PMatrix& m) const {
  return m.map([&](const Poly& p) { return restrict(p); });
}

PVector SubmanifoldData::push(const PVector& y) const { return tangent * y; }

PVector SubmanifoldData::pull_vector(const PVector& x) const {
  PMatrix minor(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int a = 0; a < dim; ++a) minor(r, a) = tangent(chart_rows[r], a);
  }
  Complex inv = det(minor).constant_value().inverse();
  PVector xr(dim);
  for (int r = 0; r < dim; ++r) xr[r] = x[chart_rows[r]];
  PVector y = adjugate(minor) * xr;
  for (auto& c : y) c = c * Poly(inv);
  return y;
}

PVector SubmanifoldData::pull_covector(const PVector& xi) const { return tangent.transpose() * xi; }

Point SubmanifoldData::image(std::span<const Complex> u) const {
  Point p;
  for (const auto& e : embedding) p.push_back(e.eval(u));
  return p;
}

PForm pullback_form(const SubmanifoldData& s, const PForm& phi) {
  const int m = s.ambient_dim;
  if (phi.dim() != m) throw DimensionError("form is not on the ambient chart");
  std::vector<PForm> dl;
  for (int i = 0; i < m; ++i) dl.push_back(PForm::linear(s.tangent.row(i)));
  PForm r(s.dim);
  for (const auto& [mask, c] : phi.terms()) {
    PForm t = PForm::scalar(s.dim, s.restrict(c));
    for (int i = 0; i < m; ++i) {
      if (mask & (Mask{1} << i)) t = wedge(t, dl[i]);
    }
    r += t;
  }
  return r;
}

PullbackResult pullback_dirac(const std::vector<PSection>& l, const SubmanifoldData& s,
                              const std::vector<Point>& samples) {
  const int m = s.ambient_dim;
  const int n = static_cast<int>(l.size());
  if (n != m) throw DimensionError("Dirac frame must have m sections");
  std::vector<PSection> lr;
  for (const auto& e : l) {
    if (e.dim() != m) throw DimensionError("section is not on the ambient chart");
    lr.push_back(s.restrict(e));
  }
  const auto pts = samples.empty() ? default_param_samples(s.dim) : samples;

  // coefficient vectors c with Σ c_a X_a ∈ TS
  std::vector<PVector> combos;
  PMatrix mk(m - s.dim, n);
  for (int j = 0; j < m - s.dim; ++j) {
    for (int a = 0; a < n; ++a) {
      Poly v(0);
      for (int i = 0; i < m; ++i) v += s.conormal[j][i] * lr[a].vec[i];
      mk(j, a) = v;
    }
  }
  if (m == s.dim) {
    for (int a = 0; a < n; ++a) {
      PVector c(n, Poly(0));
      c[a] = Poly(1);
      combos.push_back(c);
    }
  } else {
    combos = poly_kernel(mk);
  }

  PullbackResult r;
  r.generic_rank = static_cast<int>(combos.size());
  for (const auto& p : pts) {
    if (static_cast<int>(p.size()) != s.dim) throw DimensionError("sample point has wrong dimension");
    int rk = m == s.dim ? n : n - rank(eval(mk, p));
    r.ranks.push_back(rk);
    if (rk != r.generic_rank) {
      throw DomainError("non-smooth pullback: L ∩ K⊥ has rank " + std::to_string(rk) + " at u = " + point_str(p) +
                        ", generic rank " + std::to_string(r.generic_rank));
    }
  }

  std::vector<PVector> flats;
  for (const auto& c : combos) {
    PSection e(m);
    for (auto& x : e.vec) x = Poly(0);
    for (auto& x : e.covec) x = Poly(0);
    for (int a = 0; a < n; ++a) {
      if (c[a].is_zero()) continue;
      e = e + c[a] * lr[a];
    }
    PSection img(s.pull_vector(e.vec), s.pull_covector(e.covec));
    auto trial = flats;
    trial.push_back(img.flat());
    if (generic_rank(trial, 2 * s.dim) > static_cast<int>(flats.size())) {
      flats.push_back(img.flat());
      r.frame.push_back(img);
    }
    if (static_cast<int>(r.frame.size()) == s.dim) break;
  }
  if (static_cast<int>(r.frame.size()) != s.dim) {
    throw DomainError("pullback has rank " + std::to_string(r.frame.size()) + " < dim S");
  }
  DiracFrame::validate(r.frame);
  std::vector<PVector> flat_frame;
  for (const auto& e : r.frame) flat_frame.push_back(e.flat());
  for (const auto& p : pts) r.frame_ranks.push_back(rank_at(flat_frame, 2 * s.dim, p));
  r.h = pullback_form(s, s.h);
  r.tensor = involutivity_tensor(r.frame, r.h);
  return r;
}

GeneralizedTangent generalized_tangent(const SubmanifoldData& s) {
  const int m = s.ambient_dim;
  GeneralizedTangent g;
  PMatrix minor(s.dim, s.dim);
  for (int r = 0; r < s.dim; ++r) {
    for (int a = 0; a < s.dim; ++a) minor(r, a) = s.tangent(s.chart_rows[r], a);
  }
  Complex inv = det(minor).constant_value().inverse();
  PMatrix adj_t = adjugate(minor).transpose();
  for (int a = 0; a < s.dim; ++a) {
    PVector w(s.dim);
    for (int b = 0; b < s.dim; ++b) w[b] = s.f(a, b);
    PVector lifted = adj_t * w;
    PVector eta(m, Poly(0));
    for (int r = 0; r < s.dim; ++r) eta[s.chart_rows[r]] = lifted[r] * Poly(inv);
    g.frame.push_back(PSection(s.tangent.col(a), eta));
  }
  for (const auto& k : s.conormal) g.frame.push_back(PSection(PVector(m, Poly(0)), k));
  return g;
}

BraneReport brane_check(const GCField& j, const SubmanifoldData& s, const std::vector<Point>& samples) {
  const int m = s.ambient_dim;
  if (j.dim() != m) throw DimensionError("structure and submanifold live on different charts");
  const auto pts = samples.empty() ? default_param_samples(s.dim) : samples;
  BraneReport r;
  PMatrix jr = s.restrict(j.matrix());
  auto tau = generalized_tangent(s).frame;

  std::vector<PSection> jtau;
  for (const auto& t : tau) jtau.push_back(apply_matrix(jr, t));
  for (int i = 0; i < m && !r.violation; ++i) {
    for (int k = 0; k < m; ++k) {
      Poly v = pairing(jtau[i], tau[k]);
      if (!v.is_zero()) {
        r.violation = TensorEntry{i, -1, k, v};
        break;
      }
    }
  }
  r.compatible = !r.violation;
  r.space_filling = s.dim == m;
  if (!r.compatible) return r;

  for (int jx = s.dim; jx < m; ++jx) r.delta.push_back(jtau[jx].vec);
  r.coisotropic = true;
  for (const auto& k : s.conormal) {
    for (const auto& d : r.delta) {
      Poly v(0);
      for (int i = 0; i < m; ++i) v += k[i] * d[i];
      if (!v.is_zero()) r.coisotropic = false;
    }
  }
  r.delta_rank = generic_rank(r.delta, m);
  for (const auto& p : pts) r.delta_ranks.push_back(rank_at(r.delta, m, p));
  r.lagrangian = r.coisotropic && r.delta_rank == s.dim;

  // ambient symplectic part when J has the form J_ω
  PMatrix a_block = jr.block(0, 0, m, m);
  std::optional<PMatrix> pulled_omega;
  if (a_block.is_zero()) {
    PMatrix omega = jr.block(m, 0, m, m).transpose();
    pulled_omega = s.tangent.transpose() * omega * s.tangent;
  }
  auto sigma = [&]() { return s.f + Poly(Complex::i()) * *pulled_omega; };

  if (r.delta_rank == 0) {
    PMatrix ind(s.dim, s.dim);
    for (int a = 0; a < s.dim; ++a) {
      PVector y = s.pull_vector(jtau[a].vec);
      for (int b = 0; b < s.dim; ++b) ind(b, a) = y[b];
    }
    r.induced_j = ind;
    r.f_type_11 = ind.transpose() * s.f * ind == s.f;
    if (pulled_omega) {
      PMatrix sg = sigma();
      PMatrix lhs = ind.transpose() * sg;
      PMatrix isg = Poly(Complex::i()) * sg;
      // pure type, nondegenerate on the ±i eigenspace of I
      std::vector<PVector> rows;
      for (int a = 0; a < s.dim; ++a) rows.push_back(sg.row(a));
      if (2 * generic_rank(rows, s.dim) == s.dim) {
        if (lhs == isg) r.holomorphic_sign = 1;
        if (lhs == -isg) r.holomorphic_sign = -1;
        if (r.holomorphic_sign != 0) r.holomorphic_form = sg;
      }
    }
  }
  if (pulled_omega && r.coisotropic) {
    PMatrix sg = sigma();
    r.basic = true;
    for (const auto& d : r.delta) {
      if (!is_zero_vec(contract_two(sg, s.pull_vector(d)))) r.basic = false;
    }
  }

  for (const auto& p : pts) {
    CMatrix t(2 * m, m);
    CMatrix jt(2 * m, m);
    for (int c = 0; c < m; ++c) {
      CVector tf = eval(tau[c].flat(), p);
      CVector jf = eval(jtau[c].flat(), p);
      for (int i = 0; i < 2 * m; ++i) {
        t(i, c) = tf[i];
        jt(i, c) = jf[i];
      }
    }
    CMatrix rm(m, m);
    for (int c = 0; c < m; ++c) {
      auto x = solve(t, jt.col(c));
      if (!x) throw DomainError("generalized tangent degenerates at u = " + point_str(p));
      for (int i = 0; i < m; ++i) rm(i, c) = (*x)[i];
    }
    std::vector<CGenVector> ell;
    for (const auto& k : kernel(rm - Complex::i() * CMatrix::identity(m))) {
      ell.push_back(CGenVector::from_flat(t * k));
    }
    r.ell.push_back(std::move(ell));
  }
  return r;
}

PMatrix b_transform_matrix(const PMatrix& b) {
  const int m = b.rows();
  PMatrix t = PMatrix::identity(2 * m);
  t.set_block(m, 0, b.transpose());
  return t;
}

}  // namespace gcg
