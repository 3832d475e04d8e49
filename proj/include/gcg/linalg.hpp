#pragma once

#include <optional>
#include <vector>

#include "gcg/matrix.hpp"

namespace gcg {

struct Echelon {
  CMatrix reduced;          // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row
};

Echelon rref(CMatrix m);
int rank(const CMatrix& m);
// Basis of {v : m v = 0}, one vector per free column.
std::vector<CVector> kernel(const CMatrix& m);
std::optional<CVector> solve(const CMatrix& m, const CVector& b);
Complex det(CMatrix m);
CMatrix inverse(const CMatrix& m);  // DomainError if singular
// Nonzero rows of the rref of the given rows: a canonical basis of the span.
std::vector<CVector> row_space_basis(const std::vector<CVector>& rows, int width);
bool same_span(const std::vector<CVector>& a, const std::vector<CVector>& b, int width);
bool contains(const std::vector<CVector>& space, const CVector& v, int width);

// Polynomial matrices, division free.
Poly det(const PMatrix& m);
PMatrix adjugate(const PMatrix& m);
struct PolyEchelon {
  std::vector<int> pivot_rows;  // original row indices
  std::vector<int> pivot_cols;
};
// Generic (identical) rank pattern via cross-multiplying elimination.
PolyEchelon poly_echelon(const PMatrix& m);
// Polynomial kernel vectors spanning the generic kernel: one per free column,
// built from adjugates of a generically invertible pivot minor.
std::vector<PVector> poly_kernel(const PMatrix& m);

CMatrix eval(const PMatrix& m, std::span<const Complex> point);
CVector eval(const PVector& v, std::span<const Complex> point);
PMatrix to_poly(const CMatrix& m);

}  // namespace gcg
