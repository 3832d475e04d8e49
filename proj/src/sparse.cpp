#include "gcg/sparse.hpp"

#include "gcg/error.hpp"

namespace gcg {

void SparseSystem::reduce(Row& row, Complex& rhs) const {
  // Pivot rows only hold columns above their pivot, so sweeping upward
  // terminates.
  auto it = row.begin();
  while (it != row.end()) {
    auto p = pivots_.find(it->first);
    if (p == pivots_.end()) {
      ++it;
      continue;
    }
    const int col = it->first;
    Complex f = it->second;
    rhs -= f * p->second.rhs;
    for (const auto& [c, v] : p->second.row) {
      Complex& slot = row[c];
      slot -= f * v;
    }
    for (auto e = row.begin(); e != row.end();) {
      if (e->second.is_zero()) {
        e = row.erase(e);
      } else {
        ++e;
      }
    }
    it = row.upper_bound(col);
  }
}

bool SparseSystem::add(Row row, Complex rhs) {
  for (auto e = row.begin(); e != row.end();) {
    if (e->first < 0 || e->first >= n_) throw DimensionError("unknown index out of range");
    if (e->second.is_zero()) {
      e = row.erase(e);
    } else {
      ++e;
    }
  }
  reduce(row, rhs);
  if (row.empty()) {
    if (!rhs.is_zero()) consistent_ = false;
    return consistent_;
  }
  const int col = row.begin()->first;
  Complex inv = row.begin()->second.inverse();
  for (auto& [c, v] : row) v = v * inv;
  pivots_.emplace(col, Pivot{std::move(row), rhs * inv});
  return consistent_;
}

std::vector<Complex> SparseSystem::best_effort() const {
  std::vector<Complex> x(n_, Complex(0));
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    Complex v = it->second.rhs;
    for (const auto& [c, a] : it->second.row) {
      if (c != it->first && !x[c].is_zero()) v -= a * x[c];
    }
    x[it->first] = v;
  }
  return x;
}

std::optional<std::vector<Complex>> SparseSystem::solution() const {
  if (!consistent_) return std::nullopt;
  return best_effort();
}

}  // namespace gcg
