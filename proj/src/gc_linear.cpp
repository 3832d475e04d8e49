#include "gcg/gc_linear.hpp"

#include <map>

namespace gcg {

namespace {

std::string flat_label(int idx, int m) {
  return idx < m ? "e_" + std::to_string(idx + 1) : "e^" + std::to_string(idx - m + 1);
}

CMatrix outer_two_form(const CVector& a, const CVector& b) {
  const int m = static_cast<int>(a.size());
  CMatrix s(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) s(i, j) = a[i] * b[j] - a[j] * b[i];
  }
  return s;
}

CVector conj_vec(const CVector& v) {
  CVector r = v;
  for (auto& c : r) c = c.conj();
  return r;
}

CMatrix re_part(const CMatrix& m) {
  return m.map([](const Complex& c) { return Complex(c.re()); });
}

CMatrix im_part(const CMatrix& m) {
  return m.map([](const Complex& c) { return Complex(c.im()); });
}

// Map matrix of X -> i_X ω from component matrix ω.
CMatrix contraction_map(const CMatrix& omega) { return omega.transpose(); }

}  // namespace

CMatrix gram(int m) {
  CMatrix g(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    g(i, m + i) = Complex(Rational(1, 2));
    g(m + i, i) = Complex(Rational(1, 2));
  }
  return g;
}

std::optional<std::string> GCStructure::violation(const CMatrix& j) {
  if (!j.is_square() || j.rows() % 2 != 0) return "shape: J must be a 2m x 2m matrix";
  const int m = j.rows() / 2;
  check_dim(m);
  for (int a = 0; a < j.rows(); ++a) {
    for (int b = 0; b < j.cols(); ++b) {
      if (!j(a, b).is_real()) return "reality: entry (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ") is not real";
    }
  }
  CMatrix sq = j * j;
  for (int a = 0; a < j.rows(); ++a) {
    for (int b = 0; b < j.cols(); ++b) {
      Complex want = a == b ? Complex(-1) : Complex(0);
      if (!(sq(a, b) == want)) {
        return "J^2 = -1: entry (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ") of J^2 is " + sq(a, b).str();
      }
    }
  }
  CMatrix g = gram(m);
  CMatrix o = j.transpose() * g * j;
  for (int a = 0; a < j.rows(); ++a) {
    for (int b = 0; b < j.cols(); ++b) {
      if (!(o(a, b) == g(a, b))) {
        return "orthogonality: <J " + flat_label(a, m) + ", J " + flat_label(b, m) + "> = " + o(a, b).str() +
               " but <" + flat_label(a, m) + ", " + flat_label(b, m) + "> = " + g(a, b).str();
      }
    }
  }
  return std::nullopt;
}

GCStructure GCStructure::validate(const CMatrix& j) {
  if (auto v = violation(j)) throw ValidationError("not a generalized complex structure: " + *v);
  GCStructure s;
  s.j_ = j;
  return s;
}

CMatrix j_symplectic(const CMatrix& omega) {
  if (!omega.is_antisymmetric()) throw ValidationError("symplectic form must be antisymmetric");
  const int m = omega.rows();
  CMatrix w = contraction_map(omega);
  CMatrix j(2 * m, 2 * m);
  j.set_block(0, m, -inverse(w));
  j.set_block(m, 0, w);
  return j;
}

CMatrix j_complex(const CMatrix& jc) {
  const int m = jc.rows();
  CMatrix j(2 * m, 2 * m);
  j.set_block(0, 0, -jc);
  j.set_block(m, m, jc.transpose());
  return j;
}

CMatrix standard_complex(int k) {
  CMatrix jc(2 * k, 2 * k);
  for (int a = 0; a < k; ++a) {
    jc(2 * a + 1, 2 * a) = 1;
    jc(2 * a, 2 * a + 1) = -1;
  }
  return jc;
}

CMatrix standard_symplectic(int n) {
  CMatrix w(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    w(2 * a, 2 * a + 1) = 1;
    w(2 * a + 1, 2 * a) = -1;
  }
  return w;
}

CMatrix direct_sum(const CMatrix& j1, const CMatrix& j2) {
  const int m1 = j1.rows() / 2, m2 = j2.rows() / 2, m = m1 + m2;
  auto idx1 = [&](int a) { return a < m1 ? a : m + (a - m1); };
  auto idx2 = [&](int a) { return a < m2 ? m1 + a : m + m1 + (a - m2); };
  CMatrix j(2 * m, 2 * m);
  for (int a = 0; a < 2 * m1; ++a) {
    for (int b = 0; b < 2 * m1; ++b) j(idx1(a), idx1(b)) = j1(a, b);
  }
  for (int a = 0; a < 2 * m2; ++a) {
    for (int b = 0; b < 2 * m2; ++b) j(idx2(a), idx2(b)) = j2(a, b);
  }
  return j;
}

CMatrix conjugate(const CMatrix& j, const Transform& t) {
  CMatrix m = transform_matrix(t);
  return m * j * inverse(m);
}

MaxIsotropic eigenbundle(const GCStructure& s) {
  const int n2 = 2 * s.dim();
  CMatrix shifted = s.matrix() - Complex::i() * CMatrix::identity(n2);
  std::vector<CGenVector> basis;
  for (const auto& v : kernel(shifted)) basis.push_back(CGenVector::from_flat(v));
  return MaxIsotropic::from_basis(basis);
}

int type_of(const GCStructure& s) {
  const int m = s.dim();
  CMatrix both(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) both(m + i, i) = 1;
  both.set_block(0, m, s.matrix().block(0, m, 2 * m, m));
  int meet = 2 * m - rank(both);
  return meet / 2;
}

CMatrix CanonicalSpinorData::b_form() const { return re_part(a_form); }
CMatrix CanonicalSpinorData::omega_form() const { return im_part(a_form); }

CanonicalSpinorData extract_canonical(const CForm& phi) {
  if (phi.is_zero()) throw ValidationError("the zero form is not a spinor line");
  const int m = phi.dim();
  CanonicalSpinorData d;
  d.k = phi.lowest_degree();
  d.omega_k = phi.component(d.k);
  // θ's: kernel of ξ -> ξ∧Ω.
  {
    std::vector<CForm> images;
    for (int j = 0; j < m; ++j) images.push_back(wedge(CForm::generator(m, j), d.omega_k));
    std::map<Mask, int> row_of;
    for (const auto& f : images) {
      for (const auto& [mask, c] : f.terms()) row_of.emplace(mask, 0);
    }
    int next = 0;
    for (auto& [mask, idx] : row_of) idx = next++;
    CMatrix a(next, m);
    for (int j = 0; j < m; ++j) {
      for (const auto& [mask, c] : images[j].terms()) a(row_of[mask], j) = c;
    }
    d.theta = row_space_basis(kernel(a), m);
  }
  if (static_cast<int>(d.theta.size()) != d.k) {
    throw ValidationError("lowest component of degree " + std::to_string(d.k) + " is not decomposable");
  }
  std::vector<CVector> both = d.theta;
  for (const auto& t : d.theta) both.push_back(conj_vec(t));
  if (rank(both.empty() ? CMatrix(0, m) : CMatrix::from_rows(both)) != 2 * d.k) {
    throw ValidationError("Ω∧Ω̄ = 0: the spinor line meets its conjugate");
  }
  d.delta = row_space_basis(kernel(both.empty() ? CMatrix(0, m) : CMatrix::from_rows(both)), m);
  d.n_columns = complement_columns(d.delta, m);
  std::vector<CVector> cols = d.delta;
  for (int j : d.n_columns) {
    CVector e(m, Complex(0));
    e[j] = Complex(1);
    cols.push_back(e);
  }
  CMatrix p(m, m);
  for (int c = 0; c < m; ++c) {
    for (int r = 0; r < m; ++r) p(r, c) = cols[c][r];
  }
  CMatrix q = inverse(p);
  const int dd = static_cast<int>(d.delta.size());
  for (int a = 0; a < dd; ++a) d.adapted.push_back(q.row(a));
  for (const auto& t : d.theta) d.adapted.push_back(t);
  for (const auto& t : d.theta) d.adapted.push_back(conj_vec(t));

  // Unknown pairs among Δ* (indices < dd) and N*_{0,1} (indices >= dd + k).
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> allowed;
  for (int a = 0; a < dd; ++a) allowed.push_back(a);
  for (int a = 0; a < d.k; ++a) allowed.push_back(dd + d.k + a);
  for (std::size_t x = 0; x < allowed.size(); ++x) {
    for (std::size_t y = x + 1; y < allowed.size(); ++y) pairs.emplace_back(allowed[x], allowed[y]);
  }
  std::vector<CForm> columns;
  for (auto [a, b] : pairs) {
    columns.push_back(wedge(wedge(CForm::linear(d.adapted[a]), CForm::linear(d.adapted[b])), d.omega_k));
  }
  CForm target = phi.component(d.k + 2);
  std::map<Mask, int> row_of;
  for (const auto& f : columns) {
    for (const auto& [mask, c] : f.terms()) row_of.emplace(mask, 0);
  }
  for (const auto& [mask, c] : target.terms()) row_of.emplace(mask, 0);
  int next = 0;
  for (auto& [mask, idx] : row_of) idx = next++;
  CMatrix sys(next, static_cast<int>(pairs.size()));
  CVector rhs(next, Complex(0));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const auto& [mask, v] : columns[c].terms()) sys(row_of[mask], static_cast<int>(c)) = v;
  }
  for (const auto& [mask, v] : target.terms()) rhs[row_of[mask]] = v;
  auto sol = solve(sys, rhs);
  if (!sol) throw ValidationError("spinor is not of the form exp(A)∧Ω");
  d.a_form = CMatrix(m, m);
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    if ((*sol)[c].is_zero()) continue;
    d.a_form += (*sol)[c] * outer_two_form(d.adapted[pairs[c].first], d.adapted[pairs[c].second]);
  }
  d.generator = wedge(wedge_exp(two_form_from_matrix<Complex>(d.a_form)), d.omega_k);
  if (!(d.generator == phi)) throw ValidationError("spinor is not pure: exp(A)∧Ω differs in higher degrees");
  return d;
}

CanonicalSpinorData canonical_spinor(const GCStructure& s) { return extract_canonical(pure_spinor(eigenbundle(s))); }

CForm grading_project(const GCStructure& s, const CForm& phi, int k) {
  const int n = s.dim() / 2;
  if (k < -n || k > n) throw DimensionError("grading index out of range");
  SoElement<Complex> x = SoElement<Complex>::from_matrix(s.matrix());
  CForm r = phi;
  for (int j = -n; j <= n; ++j) {
    if (j == k) continue;
    CForm applied = spin_act(x, r) - r * Complex(0, j);
    r = applied * Complex(0, k - j).inverse();
  }
  return r;
}

CMatrix poisson_of(const GCStructure& s) { return s.p_block().transpose(); }

DarbouxData darboux_point(const GCStructure& s) {
  CanonicalSpinorData c = canonical_spinor(s);
  const int m = s.dim();
  const int dd = static_cast<int>(c.delta.size());
  const int k = c.k;
  DarbouxData out;
  out.k = k;
  out.delta = c.delta;
  out.omega_k = c.omega_k;
  for (int j : c.n_columns) {
    CVector e(m, Complex(0));
    e[j] = Complex(1);
    out.n_frame.push_back(e);
  }
  // Components of A on the adapted coframe: A = sum a_{αβ} f^α∧f^β.
  CMatrix p(m, m);
  for (int a = 0; a < m; ++a) {
    for (int i = 0; i < m; ++i) p(a, i) = c.adapted[a][i];
  }
  // S = Pᵀ N P  =>  N = P^{-T} S P^{-1}
  CMatrix pinv = inverse(p);
  CMatrix n = pinv.transpose() * c.a_form * pinv;
  auto is_delta = [&](int a) { return a < dd; };
  auto is_bar = [&](int a) { return a >= dd + k; };
  // conj of f^a: δ^a real, θ_i <-> θ̄_i.
  auto conj_index = [&](int a) { return is_delta(a) ? a : (is_bar(a) ? a - k : a + k); };
  CMatrix a200(m, m), a101(m, m), a002(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (n(a, b).is_zero()) continue;
      if (is_delta(a) && is_delta(b)) {
        a200(a, b) = n(a, b);
      } else if ((is_delta(a) && is_bar(b)) || (is_bar(a) && is_delta(b))) {
        a101(a, b) = n(a, b);
      } else if (is_bar(a) && is_bar(b)) {
        a002(a, b) = n(a, b);
      } else {
        throw ValidationError("extracted 2-form has components outside the adapted grading");
      }
    }
  }
  auto conj_graded = [&](const CMatrix& x) {
    CMatrix r(m, m);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        if (!x(a, b).is_zero()) r(conj_index(a), conj_index(b)) = x(a, b).conj();
      }
    }
    return r;
  };
  auto to_standard = [&](const CMatrix& x) { return p.transpose() * x * p; };
  CMatrix bt = Complex(Rational(1, 2)) * (a200 + conj_graded(a200)) + a101 + conj_graded(a101) + a002 +
               conj_graded(a002);
  CMatrix w0 = Complex(0, Rational(-1, 2)) * (a200 - conj_graded(a200));
  out.b_tilde = to_standard(bt);
  out.omega0 = to_standard(w0);
  CForm rebuilt = wedge(wedge_exp(two_form_from_matrix<Complex>(out.b_tilde + Complex::i() * out.omega0)), c.omega_k);
  out.line_equal = proportional(rebuilt, c.generator);
  if (dd == 0) {
    out.symplectic_on_delta = true;
  } else {
    CMatrix dm = CMatrix::from_rows(c.delta);
    out.symplectic_on_delta = !det(dm * out.omega0 * dm.transpose()).is_zero();
  }
  if (k == 0) {
    out.complex_on_n = true;
  } else {
    CMatrix restricted(2 * k, 2 * k);
    for (int a = 0; a < 2 * k; ++a) {
      for (int b = 0; b < 2 * k; ++b) restricted(a, b) = c.adapted[dd + a][c.n_columns[b]];
    }
    out.complex_on_n = !det(restricted).is_zero();
  }
  return out;
}

}  // namespace gcg
