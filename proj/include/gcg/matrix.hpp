#pragma once

#include <string>
#include <vector>

#include "gcg/error.hpp"
#include "gcg/scalar.hpp"

namespace gcg {

// Dense row-major matrix over Complex or Poly.
template <class C>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, C(0)) {
    if (rows < 0 || cols < 0) throw DimensionError("negative matrix size");
  }
  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = C(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<C>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows_; ++i) {
      if (static_cast<int>(rows[i].size()) != m.cols_) throw DimensionError("ragged matrix rows");
      for (int j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  C& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const C& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  std::vector<C> row(int i) const { return std::vector<C>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  std::vector<C> col(int j) const {
    std::vector<C> c;
    c.reserve(rows_);
    for (int i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }
  std::vector<std::vector<C>> to_rows() const {
    std::vector<std::vector<C>> r;
    for (int i = 0; i < rows_; ++i) r.push_back(row(i));
    return r;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }
  Matrix block(int r0, int c0, int nr, int nc) const {
    Matrix b(nr, nc);
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    }
    return b;
  }
  void set_block(int r0, int c0, const Matrix& b) {
    for (int i = 0; i < b.rows(); ++i) {
      for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }
  }
  template <class F>
  auto map(F f) const {
    using D = decltype(f(std::declval<C>()));
    Matrix<D> r(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
    }
    return r;
  }
  Matrix conj() const {
    return map([](const C& c) { return gcg::conj(c); });
  }
  bool is_zero() const {
    for (const auto& c : data_) {
      if (!gcg::is_zero(c)) return false;
    }
    return true;
  }
  bool is_antisymmetric() const {
    if (!is_square()) return false;
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j <= i; ++j) {
        if (!((*this)(i, j) + (*this)(j, i) == C(0))) return false;
      }
    }
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& c : r.data_) c = -c;
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product size mismatch");
    Matrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int k = 0; k < a.cols_; ++k) {
        const C& aik = a(i, k);
        if (gcg::is_zero(aik)) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    }
    return r;
  }
  friend Matrix operator*(const C& s, Matrix a) {
    for (auto& c : a.data_) c = s * c;
    return a;
  }
  friend std::vector<C> operator*(const Matrix& a, const std::vector<C>& v) {
    if (a.cols_ != static_cast<int>(v.size())) throw DimensionError("matrix-vector size mismatch");
    std::vector<C> r(a.rows_, C(0));
    for (int i = 0; i < a.rows_; ++i) {
      for (int j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    }
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix size mismatch");
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<C> data_;
};

using CMatrix = Matrix<Complex>;
using PMatrix = Matrix<Poly>;
using CVector = std::vector<Complex>;
using PVector = std::vector<Poly>;

}  // namespace gcg
