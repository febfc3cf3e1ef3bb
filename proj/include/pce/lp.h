#ifndef PCE_LP_H_
#define PCE_LP_H_

#include <optional>
#include <span>
#include <variant>

#include "pce/rational.h"

namespace pce {

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LinearConstraint {
  RationalVector coefficients;
  Relation relation;
  Rational rhs;
};

// Default bounds are [0, +inf). A missing lower bound means -inf.
struct VariableBounds {
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;
};

// maximize objective . x  subject to the constraints and variable bounds.
class LinearProgram {
 public:
  explicit LinearProgram(int num_variables);

  int num_variables() const { return static_cast<int>(objective_.size()); }
  const RationalVector& objective() const { return objective_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  const std::vector<VariableBounds>& bounds() const { return bounds_; }

  // Throws std::invalid_argument on width mismatch.
  void SetObjective(RationalVector objective);
  void AddConstraint(RationalVector coefficients, Relation relation, Rational rhs);
  void SetBounds(int variable, std::optional<Rational> lower, std::optional<Rational> upper);

  // Constraint permutation; used to check order independence.
  void PermuteConstraints(std::span<const int> order);

 private:
  RationalVector objective_;
  std::vector<LinearConstraint> constraints_;
  std::vector<VariableBounds> bounds_;
};

struct LpOptimal {
  Rational value;
  RationalVector point;
};
struct LpInfeasible {};
struct LpUnbounded {};
using LpResult = std::variant<LpOptimal, LpInfeasible, LpUnbounded>;

// Two-phase dense simplex over exact rationals with Bland's rule.
LpResult SolveExact(const LinearProgram& lp);

struct MaxMinResult {
  Rational delta;
  RationalVector point;
};

// Largest delta such that some feasible point of `region` (its objective is
// ignored) has every listed coordinate >= delta. nullopt when the region is
// empty. Throws PreconditionError when delta is unbounded.
std::optional<MaxMinResult> MaxMinCoordinate(const LinearProgram& region,
                                             std::span<const int> coordinates);

}  // namespace pce

#endif  // PCE_LP_H_
