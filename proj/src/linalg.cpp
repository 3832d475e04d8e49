#include "gcg/linalg.hpp"

#include <algorithm>

namespace gcg {

Echelon rref(CMatrix m) {
  Echelon e;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i) {
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    }
    Complex inv = m(r, c).inverse();
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Complex f = m(i, c);
      for (int j = c; j < m.cols(); ++j) {
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
      }
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.reduced = std::move(m);
  return e;
}

int rank(const CMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

std::vector<CVector> kernel(const CMatrix& m) {
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivots) is_pivot[c] = true;
  std::vector<CVector> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    CVector v(m.cols(), Complex(0));
    v[f] = Complex(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(static_cast<int>(r), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<CVector> solve(const CMatrix& m, const CVector& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw DimensionError("right-hand side size mismatch");
  CMatrix aug(m.rows(), m.cols() + 1);
  aug.set_block(0, 0, m);
  for (int i = 0; i < m.rows(); ++i) aug(i, m.cols()) = b[i];
  Echelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  CVector x(m.cols(), Complex(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(static_cast<int>(r), m.cols());
  return x;
}

Complex det(CMatrix m) {
  if (!m.is_square()) throw DimensionError("determinant of a non-square matrix");
  Complex d(1);
  const int n = m.rows();
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i) {
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    }
    if (p < 0) return Complex(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    Complex inv = m(c, c).inverse();
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Complex f = m(i, c) * inv;
      for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

CMatrix inverse(const CMatrix& m) {
  if (!m.is_square()) throw DimensionError("inverse of a non-square matrix");
  const int n = m.rows();
  CMatrix aug(n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, CMatrix::identity(n));
  Echelon e = rref(aug);
  if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] != n - 1) throw DomainError("singular matrix");
  return e.reduced.block(0, n, n, n);
}

std::vector<CVector> row_space_basis(const std::vector<CVector>& rows, int width) {
  if (rows.empty()) return {};
  CMatrix m(static_cast<int>(rows.size()), width);
  for (int i = 0; i < m.rows(); ++i) {
    if (static_cast<int>(rows[i].size()) != width) throw DimensionError("vector width mismatch");
    for (int j = 0; j < width; ++j) m(i, j) = rows[i][j];
  }
  Echelon e = rref(m);
  std::vector<CVector> out;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) out.push_back(e.reduced.row(static_cast<int>(r)));
  return out;
}

namespace {

int span_rank(const std::vector<CVector>& a, const std::vector<CVector>& b, int width) {
  std::vector<CVector> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return static_cast<int>(row_space_basis(all, width).size());
}

}  // namespace

bool same_span(const std::vector<CVector>& a, const std::vector<CVector>& b, int width) {
  int ra = static_cast<int>(row_space_basis(a, width).size());
  int rb = static_cast<int>(row_space_basis(b, width).size());
  return ra == rb && span_rank(a, b, width) == ra;
}

bool contains(const std::vector<CVector>& space, const CVector& v, int width) {
  int r = static_cast<int>(row_space_basis(space, width).size());
  return span_rank(space, {v}, width) == r;
}

namespace {

// Laplace expansion along the first listed row.
Poly subdet(const PMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const std::size_t n = rows.size();
  if (n == 0) return Poly(1);
  if (n == 1) return m(rows[0], cols[0]);
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  Poly total;
  for (std::size_t k = 0; k < n; ++k) {
    const Poly& entry = m(rows[0], cols[k]);
    if (entry.is_zero()) continue;
    std::vector<int> sub_cols;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k) sub_cols.push_back(cols[j]);
    }
    Poly t = entry * subdet(m, sub_rows, sub_cols);
    if (k & 1) {
      total -= t;
    } else {
      total += t;
    }
  }
  return total;
}

}  // namespace

Poly det(const PMatrix& m) {
  if (!m.is_square()) throw DimensionError("determinant of a non-square matrix");
  std::vector<int> idx(m.rows());
  for (int i = 0; i < m.rows(); ++i) idx[i] = i;
  return subdet(m, idx, idx);
}

PMatrix adjugate(const PMatrix& m) {
  if (!m.is_square()) throw DimensionError("adjugate of a non-square matrix");
  const int n = m.rows();
  PMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = Poly(1);
    return adj;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> rows, cols;
      for (int k = 0; k < n; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      Poly c = subdet(m, rows, cols);
      adj(i, j) = ((i + j) & 1) ? -c : c;
    }
  }
  return adj;
}

PolyEchelon poly_echelon(const PMatrix& m) {
  PMatrix w = m;
  std::vector<int> order(m.rows());
  for (int i = 0; i < m.rows(); ++i) order[i] = i;
  PolyEchelon e;
  int r = 0;
  for (int c = 0; c < w.cols() && r < w.rows(); ++c) {
    int p = -1;
    for (int i = r; i < w.rows(); ++i) {
      if (!w(i, c).is_zero()) {
        p = i;
        break;
      }
    }
    if (p < 0) continue;
    if (p != r) {
      for (int j = 0; j < w.cols(); ++j) std::swap(w(p, j), w(r, j));
      std::swap(order[p], order[r]);
    }
    for (int i = r + 1; i < w.rows(); ++i) {
      if (w(i, c).is_zero()) continue;
      Poly a = w(r, c);
      Poly b = w(i, c);
      for (int j = c; j < w.cols(); ++j) w(i, j) = a * w(i, j) - b * w(r, j);
    }
    e.pivot_rows.push_back(order[r]);
    e.pivot_cols.push_back(c);
    ++r;
  }
  return e;
}

std::vector<PVector> poly_kernel(const PMatrix& m) {
  PolyEchelon e = poly_echelon(m);
  const int rk = static_cast<int>(e.pivot_cols.size());
  PMatrix minor(rk, rk);
  for (int a = 0; a < rk; ++a) {
    for (int b = 0; b < rk; ++b) minor(a, b) = m(e.pivot_rows[a], e.pivot_cols[b]);
  }
  Poly d = rk == 0 ? Poly(1) : det(minor);
  PMatrix adj = rk == 0 ? PMatrix() : adjugate(minor);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  std::vector<PVector> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    // minor * v_P + column_f * d = 0  =>  v_P = -adj * column_f.
    PVector v(m.cols(), Poly(0));
    v[f] = d;
    for (int a = 0; a < rk; ++a) {
      Poly s;
      for (int b = 0; b < rk; ++b) s += adj(a, b) * m(e.pivot_rows[b], f);
      v[e.pivot_cols[a]] = -s;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

CMatrix eval(const PMatrix& m, std::span<const Complex> point) {
  return m.map([&](const Poly& p) { return p.eval(point); });
}

CVector eval(const PVector& v, std::span<const Complex> point) {
  CVector r;
  r.reserve(v.size());
  for (const auto& p : v) r.push_back(p.eval(point));
  return r;
}

PMatrix to_poly(const CMatrix& m) {
  return m.map([](const Complex& c) { return Poly(c); });
}

}  // namespace gcg
