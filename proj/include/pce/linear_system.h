#ifndef PCE_LINEAR_SYSTEM_H_
#define PCE_LINEAR_SYSTEM_H_

#include <variant>
#include <vector>

#include "pce/rational.h"

namespace pce {

using RationalMatrix = std::vector<RationalVector>;

struct UniqueSolution {
  RationalVector x;
};
struct NoSolution {};
// Every solution is particular + sum_k t_k * nullspace[k].
struct Underdetermined {
  RationalVector particular;
  std::vector<RationalVector> nullspace;
};
using LinearSystemResult = std::variant<UniqueSolution, NoSolution, Underdetermined>;

// Exact Gauss-Jordan elimination of A x = b. Free variables are set to zero
// in the particular solution. Throws std::invalid_argument on ragged A or
// when b does not match the row count.
LinearSystemResult SolveLinearSystemExact(const RationalMatrix& a, const RationalVector& b,
                                          int num_columns = -1);

}  // namespace pce

#endif  // PCE_LINEAR_SYSTEM_H_
