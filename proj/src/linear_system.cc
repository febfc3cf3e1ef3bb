#include "pce/linear_system.h"

#include <stdexcept>

namespace pce {

LinearSystemResult SolveLinearSystemExact(const RationalMatrix& a, const RationalVector& b,
                                          int num_columns) {
  if (a.size() != b.size()) throw std::invalid_argument("row count of A and b differ");
  const int n = num_columns >= 0 ? num_columns
                                 : (a.empty() ? 0 : static_cast<int>(a.front().size()));
  for (const auto& row : a) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("ragged matrix");
  }
  const int m = static_cast<int>(a.size());
  RationalMatrix t(m);
  for (int r = 0; r < m; ++r) {
    t[r] = a[r];
    t[r].push_back(b[r]);
  }
  std::vector<int> pivot_columns;
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int pivot = -1;
    for (int r = rank; r < m; ++r) {
      if (sgn(t[r][col]) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(t[rank], t[pivot]);
    const Rational inverse = 1 / t[rank][col];
    for (int j = col; j <= n; ++j) t[rank][j] *= inverse;
    for (int r = 0; r < m; ++r) {
      if (r == rank || sgn(t[r][col]) == 0) continue;
      const Rational factor = t[r][col];
      for (int j = col; j <= n; ++j) t[r][j] -= factor * t[rank][j];
    }
    pivot_columns.push_back(col);
    ++rank;
  }
  for (int r = rank; r < m; ++r) {
    if (sgn(t[r][n]) != 0) return NoSolution{};
  }
  RationalVector particular(n, Rational(0));
  for (int k = 0; k < rank; ++k) particular[pivot_columns[k]] = t[k][n];
  if (rank == n) return UniqueSolution{std::move(particular)};

  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_columns) is_pivot[c] = true;
  std::vector<RationalVector> nullspace;
  for (int free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(n, Rational(0));
    v[free] = 1;
    for (int k = 0; k < rank; ++k) v[pivot_columns[k]] = -t[k][free];
    nullspace.push_back(std::move(v));
  }
  return Underdetermined{std::move(particular), std::move(nullspace)};
}

}  // namespace pce
