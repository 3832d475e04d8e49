#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gcg/scalar.hpp"

namespace gcg {

// Incremental sparse Gaussian elimination over Q(i) for systems with many
// more equations than unknowns (coefficient matching of polynomial ansatze).
class SparseSystem {
 public:
  using Row = std::map<int, Complex>;

  explicit SparseSystem(int unknowns) : n_(unknowns) {}

  int unknowns() const { return n_; }
  // Adds sum_c row[c] x_c = rhs. Returns false once the system is inconsistent.
  bool add(Row row, Complex rhs);
  bool consistent() const { return consistent_; }
  int rank() const { return static_cast<int>(pivots_.size()); }
  // A particular solution with all free unknowns zero, if consistent.
  std::optional<std::vector<Complex>> solution() const;
  // Same back-substitution, ignoring the equations found inconsistent.
  std::vector<Complex> best_effort() const;

 private:
  struct Pivot {
    Row row;  // normalized, leading entry 1 at the pivot column
    Complex rhs;
  };
  void reduce(Row& row, Complex& rhs) const;

  int n_;
  bool consistent_ = true;
  std::map<int, Pivot> pivots_;
};

}  // namespace gcg
