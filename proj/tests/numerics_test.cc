#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "pce/linear_system.h"
#include "pce/lp.h"
#include "pce/rational.h"
#include "pce/special_functions.h"

namespace pce {
namespace {

// Independent Gaussian elimination for the vertex oracle.
std::optional<RationalVector> SolveSquare(std::vector<RationalVector> a, RationalVector b) {
  const size_t n = b.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
      b[r] -= f * b[col];
    }
  }
  RationalVector x(n);
  for (size_t k = 0; k < n; ++k) x[k] = b[k] / a[k][k];
  return x;
}

struct Halfspace {
  RationalVector a;
  Relation rel;
  Rational rhs;
};

std::vector<Halfspace> AllRows(const LinearProgram& lp) {
  std::vector<Halfspace> rows;
  const int n = lp.num_variables();
  for (const auto& c : lp.constraints()) rows.push_back({c.coefficients, c.relation, c.rhs});
  for (int k = 0; k < n; ++k) {
    RationalVector e(n, Rational(0));
    e[k] = 1;
    if (lp.bounds()[k].lower) rows.push_back({e, Relation::kGreaterEqual, *lp.bounds()[k].lower});
    if (lp.bounds()[k].upper) rows.push_back({e, Relation::kLessEqual, *lp.bounds()[k].upper});
  }
  return rows;
}

bool Satisfies(const std::vector<Halfspace>& rows, const RationalVector& x) {
  for (const auto& h : rows) {
    Rational lhs = 0;
    for (size_t k = 0; k < x.size(); ++k) lhs += h.a[k] * x[k];
    if (h.rel == Relation::kLessEqual && lhs > h.rhs) return false;
    if (h.rel == Relation::kGreaterEqual && lhs < h.rhs) return false;
    if (h.rel == Relation::kEqual && lhs != h.rhs) return false;
  }
  return true;
}

// Max of the objective over all basic feasible points. Valid for pointed
// polyhedra on which the objective is bounded above.
std::optional<Rational> VertexOracle(const LinearProgram& lp) {
  const auto rows = AllRows(lp);
  const int n = lp.num_variables();
  const int m = static_cast<int>(rows.size());
  std::optional<Rational> best;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      std::vector<RationalVector> a;
      RationalVector b;
      for (int k : pick) {
        a.push_back(rows[k].a);
        b.push_back(rows[k].rhs);
      }
      auto x = SolveSquare(a, b);
      if (!x || !Satisfies(rows, *x)) return;
      Rational v = 0;
      for (int k = 0; k < n; ++k) v += lp.objective()[k] * (*x)[k];
      if (!best || v > *best) best = v;
      return;
    }
    for (int k = start; k < m; ++k) {
      pick[depth] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

Rational SmallRational(std::mt19937_64& rng, int range = 4) {
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, 3);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

// Bounded random LP: every variable ends up inside a box, either through
// its bounds or through explicit rows.
LinearProgram RandomBoundedLp(std::mt19937_64& rng, int n, int m) {
  LinearProgram lp(n);
  RationalVector c(n);
  for (auto& v : c) v = SmallRational(rng);
  lp.SetObjective(c);
  std::uniform_int_distribution<int> kind(0, 3);
  for (int k = 0; k < n; ++k) {
    Rational lo = -Rational(std::uniform_int_distribution<int>(0, 2)(rng));
    Rational hi = Rational(std::uniform_int_distribution<int>(1, 3)(rng));
    switch (kind(rng)) {
      case 0:
        lp.SetBounds(k, lo, hi);
        break;
      case 1:
        lp.SetBounds(k, Rational(0), hi);
        break;
      case 2: {
        lp.SetBounds(k, std::nullopt, hi);
        RationalVector e(n, Rational(0));
        e[k] = 1;
        lp.AddConstraint(e, Relation::kGreaterEqual, lo);
        break;
      }
      default: {
        lp.SetBounds(k, std::nullopt, std::nullopt);
        RationalVector e(n, Rational(0));
        e[k] = 1;
        lp.AddConstraint(e, Relation::kGreaterEqual, lo);
        lp.AddConstraint(e, Relation::kLessEqual, hi);
      }
    }
  }
  std::uniform_int_distribution<int> rel(0, 4);
  for (int r = 0; r < m; ++r) {
    RationalVector a(n);
    for (auto& v : a) v = SmallRational(rng, 3);
    int which = rel(rng);
    Relation relation = which < 2 ? Relation::kLessEqual
                                  : (which < 4 ? Relation::kGreaterEqual : Relation::kEqual);
    lp.AddConstraint(a, relation, SmallRational(rng));
  }
  return lp;
}

bool PointFeasible(const LinearProgram& lp, const RationalVector& x) {
  return Satisfies(AllRows(lp), x);
}

TEST(LpTest, SingleVariableBox) {
  LinearProgram lp(1);
  lp.SetObjective({Rational(1)});
  lp.AddConstraint({Rational(1)}, Relation::kLessEqual, Rational(1));
  auto r = SolveExact(lp);
  ASSERT_TRUE(std::holds_alternative<LpOptimal>(r));
  EXPECT_EQ(std::get<LpOptimal>(r).value, 1);
  EXPECT_EQ(std::get<LpOptimal>(r).point[0], 1);
}

TEST(LpTest, SimplexFace) {
  LinearProgram lp(2);
  lp.SetObjective({Rational(1), Rational(1)});
  lp.AddConstraint({Rational(1), Rational(1)}, Relation::kLessEqual, Rational(1));
  auto r = SolveExact(lp);
  ASSERT_TRUE(std::holds_alternative<LpOptimal>(r));
  EXPECT_EQ(std::get<LpOptimal>(r).value, 1);
}

TEST(LpTest, ContradictoryBounds) {
  LinearProgram lp(1);
  lp.SetObjective({Rational(1)});
  lp.AddConstraint({Rational(1)}, Relation::kGreaterEqual, Rational(2));
  lp.AddConstraint({Rational(1)}, Relation::kLessEqual, Rational(1));
  EXPECT_TRUE(std::holds_alternative<LpInfeasible>(SolveExact(lp)));
}

TEST(LpTest, Unbounded) {
  LinearProgram lp(2);
  lp.SetObjective({Rational(1), Rational(0)});
  lp.AddConstraint({Rational(1), Rational(-1)}, Relation::kLessEqual, Rational(1));
  EXPECT_TRUE(std::holds_alternative<LpUnbounded>(SolveExact(lp)));
}

TEST(LpTest, WidthMismatchThrows) {
  LinearProgram lp(2);
  EXPECT_THROW(lp.AddConstraint({Rational(1)}, Relation::kEqual, Rational(0)),
               std::invalid_argument);
}

TEST(LpTest, NegativeRhsAndFreeVariables) {
  // max -x - y  s.t. x + y >= -3, x >= -5 free otherwise, y <= 4.
  LinearProgram lp(2);
  lp.SetObjective({Rational(-1), Rational(-1)});
  lp.SetBounds(0, Rational(-5), std::nullopt);
  lp.SetBounds(1, std::nullopt, Rational(4));
  lp.AddConstraint({Rational(1), Rational(1)}, Relation::kGreaterEqual, Rational(-3));
  auto r = SolveExact(lp);
  ASSERT_TRUE(std::holds_alternative<LpOptimal>(r));
  EXPECT_EQ(std::get<LpOptimal>(r).value, 3);
}

TEST(LpTest, AgreesWithVertexEnumeration) {
  std::mt19937_64 rng(20240611);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 6)(rng);
    int max_rows = n <= 4 ? 10 : 5;
    int m = std::uniform_int_distribution<int>(1, max_rows)(rng);
    LinearProgram lp = RandomBoundedLp(rng, n, m);
    if (static_cast<int>(lp.constraints().size()) > 10) continue;
    auto oracle = VertexOracle(lp);
    auto result = SolveExact(lp);
    ASSERT_FALSE(std::holds_alternative<LpUnbounded>(result)) << "trial " << trial;
    if (!oracle) {
      EXPECT_TRUE(std::holds_alternative<LpInfeasible>(result)) << "trial " << trial;
      ++infeasible;
      continue;
    }
    ASSERT_TRUE(std::holds_alternative<LpOptimal>(result)) << "trial " << trial;
    const auto& opt = std::get<LpOptimal>(result);
    EXPECT_EQ(opt.value, *oracle) << "trial " << trial;
    EXPECT_TRUE(PointFeasible(lp, opt.point)) << "trial " << trial;
    ++optimal;
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 5);
}

TEST(LpTest, RowOrderIndependence) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 5)(rng);
    LinearProgram lp = RandomBoundedLp(rng, n, 4);
    auto base = SolveExact(lp);
    std::vector<int> order(lp.constraints().size());
    std::iota(order.begin(), order.end(), 0);
    for (int p = 0; p < 3; ++p) {
      std::shuffle(order.begin(), order.end(), rng);
      LinearProgram permuted = lp;
      permuted.PermuteConstraints(order);
      auto r = SolveExact(permuted);
      ASSERT_EQ(base.index(), r.index());
      if (auto* opt = std::get_if<LpOptimal>(&base)) {
        EXPECT_EQ(opt->value, std::get<LpOptimal>(r).value);
      }
    }
  }
}

LinearProgram Simplex(int n) {
  LinearProgram lp(n);
  lp.AddConstraint(RationalVector(n, Rational(1)), Relation::kEqual, Rational(1));
  return lp;
}

TEST(MaxMinTest, TwoPointSimplexBarycenter) {
  std::vector<int> coords = {0, 1};
  auto r = MaxMinCoordinate(Simplex(2), coords);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->delta, Rational(1, 2));
}

TEST(MaxMinTest, ForcedBoundary) {
  LinearProgram region = Simplex(2);
  region.AddConstraint({Rational(1), Rational(0)}, Relation::kEqual, Rational(0));
  std::vector<int> coords = {0, 1};
  auto r = MaxMinCoordinate(region, coords);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->delta, 0);
}

TEST(MaxMinTest, EmptyRegion) {
  LinearProgram region = Simplex(2);
  region.AddConstraint({Rational(1), Rational(0)}, Relation::kGreaterEqual, Rational(2));
  std::vector<int> coords = {0};
  EXPECT_FALSE(MaxMinCoordinate(region, coords));
}

// Oracle: vertex enumeration on the region augmented with delta and the rows
// x_c - delta >= 0.
Rational AugmentedOracle(const LinearProgram& region, const std::vector<int>& coords) {
  const int n = region.num_variables();
  LinearProgram aug(n + 1);
  RationalVector obj(n + 1, Rational(0));
  obj[n] = 1;
  aug.SetObjective(obj);
  for (int k = 0; k < n; ++k) {
    aug.SetBounds(k, region.bounds()[k].lower, region.bounds()[k].upper);
  }
  aug.SetBounds(n, std::nullopt, std::nullopt);
  for (const auto& c : region.constraints()) {
    RationalVector a = c.coefficients;
    a.push_back(0);
    aug.AddConstraint(a, c.relation, c.rhs);
  }
  for (int c : coords) {
    RationalVector a(n + 1, Rational(0));
    a[c] = 1;
    a[n] = -1;
    aug.AddConstraint(a, Relation::kGreaterEqual, Rational(0));
  }
  auto v = VertexOracle(aug);
  EXPECT_TRUE(v.has_value());
  return v.value_or(Rational(0));
}

TEST(MaxMinTest, FourPointSimplexWithRatioConstraint) {
  LinearProgram region = Simplex(4);
  region.AddConstraint({Rational(1), Rational(-3), Rational(0), Rational(0)},
                       Relation::kGreaterEqual, Rational(0));
  std::vector<int> coords = {0, 1, 2, 3};
  auto r = MaxMinCoordinate(region, coords);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->delta, AugmentedOracle(region, coords));
  for (int c : coords) EXPECT_GE(r->point[c], r->delta);
}

TEST(MaxMinTest, PositivityMatchesOracleOnRandomRegions) {
  std::mt19937_64 rng(9);
  int positive = 0, zero = 0;
  for (int trial = 0; trial < 150; ++trial) {
    int n = std::uniform_int_distribution<int>(2, 4)(rng);
    LinearProgram region = Simplex(n);
    int rows = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int r = 0; r < rows; ++r) {
      RationalVector a(n);
      for (auto& v : a) v = Rational(std::uniform_int_distribution<int>(-2, 2)(rng));
      int which = std::uniform_int_distribution<int>(0, 3)(rng);
      region.AddConstraint(a, which == 0 ? Relation::kEqual : Relation::kGreaterEqual,
                           Rational(0));
    }
    std::vector<int> coords(n);
    std::iota(coords.begin(), coords.end(), 0);
    auto r = MaxMinCoordinate(region, coords);
    if (!r) {
      EXPECT_FALSE(VertexOracle(region).has_value());
      continue;
    }
    Rational expect = AugmentedOracle(region, coords);
    EXPECT_EQ(r->delta, expect) << "trial " << trial;
    EXPECT_TRUE(PointFeasible(region, r->point));
    (r->delta > 0 ? positive : zero)++;
  }
  EXPECT_GT(positive, 10);
  EXPECT_GT(zero, 10);
}

TEST(MaxMinTest, CoordinatesWithNegativeLowerBound) {
  LinearProgram region(2);
  region.SetBounds(0, Rational(-1), Rational(1));
  region.SetBounds(1, Rational(-1), Rational(1));
  region.AddConstraint({Rational(1), Rational(1)}, Relation::kLessEqual, Rational(0));
  std::vector<int> coords = {0, 1};
  auto r = MaxMinCoordinate(region, coords);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->delta, 0);
}

TEST(LinearSystemTest, Identity) {
  RationalMatrix a = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  auto r = SolveLinearSystemExact(a, {Rational(3), Rational(-1, 2)});
  ASSERT_TRUE(std::holds_alternative<UniqueSolution>(r));
  EXPECT_EQ(std::get<UniqueSolution>(r).x, (RationalVector{Rational(3), Rational(-1, 2)}));
}

TEST(LinearSystemTest, OneEquationTwoUnknowns) {
  auto r = SolveLinearSystemExact({{Rational(1), Rational(1)}}, {Rational(1)});
  ASSERT_TRUE(std::holds_alternative<Underdetermined>(r));
  const auto& u = std::get<Underdetermined>(r);
  EXPECT_EQ(u.particular[0] + u.particular[1], 1);
  ASSERT_EQ(u.nullspace.size(), 1u);
  EXPECT_EQ(u.nullspace[0][0] + u.nullspace[0][1], 0);
}

TEST(LinearSystemTest, Inconsistent) {
  auto r = SolveLinearSystemExact({{Rational(1)}, {Rational(1)}}, {Rational(0), Rational(1)});
  EXPECT_TRUE(std::holds_alternative<NoSolution>(r));
}

TEST(LinearSystemTest, DimensionMismatchThrows) {
  EXPECT_THROW(SolveLinearSystemExact({{Rational(1)}}, {Rational(0), Rational(1)}),
               std::invalid_argument);
  EXPECT_THROW(SolveLinearSystemExact({{Rational(1)}, {Rational(1), Rational(2)}},
                                      {Rational(0), Rational(1)}),
               std::invalid_argument);
}

TEST(LinearSystemTest, RandomSolutionsSatisfySystem) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    int m = std::uniform_int_distribution<int>(1, 5)(rng);
    int n = std::uniform_int_distribution<int>(1, 5)(rng);
    RationalMatrix a(m, RationalVector(n));
    for (auto& row : a)
      for (auto& v : row) v = Rational(std::uniform_int_distribution<int>(-2, 2)(rng));
    RationalVector x0(n);
    for (auto& v : x0) v = SmallRational(rng);
    RationalVector b(m, Rational(0));
    for (int r = 0; r < m; ++r)
      for (int k = 0; k < n; ++k) b[r] += a[r][k] * x0[k];
    auto result = SolveLinearSystemExact(a, b);
    ASSERT_FALSE(std::holds_alternative<NoSolution>(result));
    auto check = [&](const RationalVector& x, bool homogeneous) {
      for (int r = 0; r < m; ++r) {
        Rational lhs = 0;
        for (int k = 0; k < n; ++k) lhs += a[r][k] * x[k];
        EXPECT_EQ(lhs, homogeneous ? Rational(0) : b[r]);
      }
    };
    if (auto* u = std::get_if<UniqueSolution>(&result)) {
      EXPECT_EQ(u->x, x0);
    } else {
      const auto& under = std::get<Underdetermined>(result);
      check(under.particular, false);
      for (const auto& v : under.nullspace) check(v, true);
    }
  }
}

TEST(BetaQuantileTest, UniformMedian) { EXPECT_NEAR(BetaQuantile(1, 1, 0.5), 0.5, 1e-12); }

TEST(BetaQuantileTest, ClosedForms) {
  EXPECT_NEAR(BetaQuantile(2, 1, 0.5), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(BetaQuantile(1, 2, 0.5), 1 - std::sqrt(0.5), 1e-12);
  for (double q : {0.01, 0.2, 0.5, 0.9, 0.999}) {
    for (double a : {0.5, 1.0, 3.0, 7.5}) {
      // Beta(a, 1) has CDF x^a; Beta(1, a) has CDF 1 - (1 - x)^a.
      EXPECT_NEAR(BetaQuantile(a, 1, q), std::pow(q, 1 / a), 1e-12);
      EXPECT_NEAR(BetaQuantile(1, a, q), 1 - std::pow(1 - q, 1 / a), 1e-12);
    }
  }
}

TEST(BetaQuantileTest, ReflectionAndMonotonicity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> param(0.2, 30);
  for (int trial = 0; trial < 200; ++trial) {
    double a = param(rng), b = param(rng);
    double prev = -1;
    for (int k = 1; k < 40; ++k) {
      double q = k / 40.0;
      double x = BetaQuantile(a, b, q);
      EXPECT_NEAR(x + BetaQuantile(b, a, 1 - q), 1.0, 1e-10);
      EXPECT_GE(x, prev);
      prev = x;
    }
  }
}

TEST(BetaQuantileTest, DomainErrors) {
  EXPECT_THROW(BetaQuantile(0, 1, 0.5), std::domain_error);
  EXPECT_THROW(BetaQuantile(1, -1, 0.5), std::domain_error);
  EXPECT_THROW(BetaQuantile(1, 1, 0), std::domain_error);
  EXPECT_THROW(BetaQuantile(1, 1, 1), std::domain_error);
}

TEST(DirichletTest, ReproducibleAndNormalized) {
  std::mt19937_64 a(42), b(42);
  auto x = DirichletSample({1, 1}, a);
  auto y = DirichletSample({1, 1}, b);
  EXPECT_EQ(x, y);
  EXPECT_NEAR(x[0] + x[1], 1.0, 1e-15);
}

TEST(DirichletTest, Concentration) {
  std::mt19937_64 rng(1);
  int inside = 0;
  for (int k = 0; k < 1000; ++k) {
    auto x = DirichletSample({1e6, 1e6}, rng);
    if (std::abs(x[0] - 0.5) < 0.01 && std::abs(x[1] - 0.5) < 0.01) ++inside;
  }
  EXPECT_GT(inside, 990);
}

TEST(DirichletTest, EmpiricalMean) {
  std::mt19937_64 rng(2);
  double m0 = 0, m1 = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    auto x = DirichletSample({2, 1}, rng);
    m0 += x[0];
    m1 += x[1];
  }
  EXPECT_NEAR(m0 / n, 2.0 / 3, 0.01);
  EXPECT_NEAR(m1 / n, 1.0 / 3, 0.01);
}

TEST(DirichletTest, RejectsNonpositiveCounts) {
  std::mt19937_64 rng(0);
  EXPECT_THROW(DirichletSample({1, 0}, rng), std::domain_error);
}

TEST(DirichletLinearQuantileTest, BinaryIsAnalytic) {
  EXPECT_NEAR(DirichletLinearQuantile({1, 1}, {1, 0}, 0.5, 0), 0.5, 1e-12);
  EXPECT_NEAR(DirichletLinearQuantile({2, 1}, {1, 0}, 0.5, 0), std::sqrt(0.5), 1e-12);
  // Reversed weights use the reflected level.
  EXPECT_NEAR(DirichletLinearQuantile({2, 1}, {0, 1}, 0.5, 0), 1 - std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(DirichletLinearQuantile({2, 1}, {3, -1}, 0.5, 0), -1 + 4 * std::sqrt(0.5), 1e-12);
}

TEST(DirichletLinearQuantileTest, MonteCarloMatchesMarginalBeta) {
  // alpha_0 of Dirichlet(1,1,1) is Beta(1,2).
  double mc = DirichletLinearQuantile({1, 1, 1}, {1, 0, 0}, 0.5, 123);
  EXPECT_NEAR(mc, 1 - std::sqrt(0.5), 0.01);
  EXPECT_EQ(mc, DirichletLinearQuantile({1, 1, 1}, {1, 0, 0}, 0.5, 123));
}

TEST(DirichletLinearQuantileTest, Endpoints) {
  EXPECT_EQ(DirichletLinearQuantile({1, 1, 1}, {2, -1, 5}, 0, 0), -1);
  EXPECT_EQ(DirichletLinearQuantile({1, 1, 1}, {2, -1, 5}, 1, 0), 5);
}

TEST(RationalTest, ParsesDecimalsExactly) {
  EXPECT_EQ(ParseRational("0.25"), Rational(1, 4));
  EXPECT_EQ(ParseRational("-1.5e-3"), Rational(-3, 2000));
  EXPECT_EQ(ParseRational("3/6"), Rational(1, 2));
  EXPECT_EQ(ParseRational("-7"), Rational(-7));
  EXPECT_EQ(ToString(Rational(-4) / 6), "-2/3");
  EXPECT_THROW(ParseRational("1/0"), std::invalid_argument);
  EXPECT_THROW(ParseRational("abc"), std::invalid_argument);
}

}  // namespace
}  // namespace pce
