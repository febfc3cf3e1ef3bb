#include <random>

#include <gtest/gtest.h>

#include "pce/compatibility.h"
#include "pce/errors.h"
#include "pce/standard_games.h"
#include "test_util.h"

namespace pce {
namespace {

using ::pce::testing::RandomGame;
using ::pce::testing::RandomValidatedGame;

// s beats every other pure strategy of i weakly everywhere and strictly
// somewhere, i.e. it is strictly best against every totally mixed profile.
bool InteriorDominant(const StrategicGame& g, int i, int s) {
  for (int other = 0; other < g.num_strategies(i); ++other) {
    if (other == s) continue;
    bool strict = false;
    for (int profile = 0; profile < g.num_profiles(); ++profile) {
      if (g.StrategyAt(profile, i) != 0) continue;
      const Rational d = g.payoff(profile + s * g.stride(i), i) -
                         g.payoff(profile + other * g.stride(i), i);
      if (d < 0) return false;
      strict = strict || d > 0;
    }
    if (!strict) return false;
  }
  return true;
}

// Mutual compatibility forces both strategies to be weakly dominated or both
// to be strictly best against every totally mixed profile.
void ExpectMutualEscape(const StrategicGame& g, StrategyRef a, StrategyRef b) {
  const bool dominated = IsWeaklyDominated(g, a.player, a.strategy) &&
                         IsWeaklyDominated(g, b.player, b.strategy);
  const bool dominant =
      InteriorDominant(g, a.player, a.strategy) && InteriorDominant(g, b.player, b.strategy);
  EXPECT_TRUE(dominated || dominant);
}

TEST(IsMoreCompatibleTest, RestaurantCriticOverDiner) {
  StrategicGame g = RestaurantGame();
  auto v = IsMoreCompatible(g, 0, 0, 1, 0);
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(v.vacuous);
  auto reverse = IsMoreCompatible(g, 1, 0, 0, 0);
  EXPECT_FALSE(reverse.holds);
  ASSERT_TRUE(reverse.witness);
  EXPECT_TRUE(VerifyWitness(g, 1, 0, 0, 0, *reverse.witness));
}

TEST(IsMoreCompatibleTest, LinkActiveEdgesInBothVersions) {
  for (auto version : {LinkVersion::kAntiMonotonic, LinkVersion::kCoMonotonic}) {
    StrategicGame g = LinkGame(version);
    EXPECT_TRUE(IsMoreCompatible(g, 0, 0, 1, 0).holds);
    EXPECT_TRUE(IsMoreCompatible(g, 2, 0, 3, 0).holds);
    EXPECT_FALSE(IsMoreCompatible(g, 1, 0, 0, 0).holds);
  }
}

TEST(IsMoreCompatibleTest, StrictlyDominantStrategyAlwaysMoreCompatible) {
  std::mt19937_64 rng(11);
  CompatibilityOptions unchecked;
  unchecked.validate = false;
  for (int trial = 0; trial < 20; ++trial) {
    StrategicGame g = RandomGame(rng, {2, 2, 2});
    // Make strategy 0 of player 0 strictly dominant.
    auto payoffs = g.payoff_table();
    for (int profile = 0; profile < g.num_profiles(); ++profile) {
      if (g.StrategyAt(profile, 0) == 0) {
        payoffs[profile][0] = payoffs[profile + g.stride(0)][0] + 1;
      }
    }
    StrategicGame h(g.players(), {g.strategies(0), g.strategies(1), g.strategies(2)}, payoffs);
    for (int j = 1; j < 3; ++j) {
      for (int s = 0; s < 2; ++s) EXPECT_TRUE(IsMoreCompatible(h, 0, 0, j, s, unchecked).holds);
    }
    EXPECT_THROW(IsMoreCompatible(h, 0, 0, 1, 0), PreconditionError);
  }
}

TEST(IsMoreCompatibleTest, SamePlayerRejected) {
  StrategicGame g = RestaurantGame();
  EXPECT_THROW(IsMoreCompatible(g, 0, 0, 0, 1), PreconditionError);
}

TEST(IsMoreCompatibleTest, InterchangeableRolesAtMostOneDirection) {
  std::mt19937_64 rng(12);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    // Symmetric 2-player game: U_1(a, b) = U_2(b, a).
    StrategicGame base = RandomGame(rng, {3, 3}, 4);
    std::vector<RationalVector> payoffs(9, RationalVector(2));
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        payoffs[a * 3 + b][0] = base.payoff(a * 3 + b, 0);
        payoffs[b * 3 + a][1] = base.payoff(a * 3 + b, 0);
      }
    }
    StrategicGame g(base.players(), {base.strategies(0), base.strategies(1)}, payoffs);
    if (ValidateNoStrictDominance(g)) continue;
    for (int s = 0; s < 3; ++s) {
      bool forward = IsMoreCompatible(g, 0, s, 1, s).holds;
      bool backward = IsMoreCompatible(g, 1, s, 0, s).holds;
      if (!IsWeaklyDominated(g, 0, s) && !InteriorDominant(g, 0, s)) {
        EXPECT_FALSE(forward && backward);
        ++checked;
      }
      if (forward && backward) ExpectMutualEscape(g, {0, s}, {1, s});
    }
  }
  EXPECT_GT(checked, 30);
}

TEST(IsMoreCompatibleTest, WeaklyDominantPairIsMutuallyCompatible) {
  // Both players' first strategy weakly dominates the rest without
  // dominating strictly; nothing is weakly dominated on the first row, yet
  // the relation holds in both directions.
  std::vector<RationalVector> payoffs(9, RationalVector(2));
  const int table[3][3] = {{1, 0, 0}, {4, 0, 3}, {4, -4, 3}};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      payoffs[a * 3 + b][0] = table[a][b];
      payoffs[b * 3 + a][1] = table[a][b];
    }
  }
  StrategicGame g({"a", "b"}, {{"x", "y", "z"}, {"x", "y", "z"}}, payoffs);
  ASSERT_FALSE(ValidateNoStrictDominance(g));
  EXPECT_FALSE(IsWeaklyDominated(g, 0, 1));
  EXPECT_TRUE(IsMoreCompatible(g, 0, 1, 1, 1).holds);
  EXPECT_TRUE(IsMoreCompatible(g, 1, 1, 0, 1).holds);
  EXPECT_TRUE(InteriorDominant(g, 0, 1));
}

TEST(DigraphTest, RestaurantContainsCriticEdge) {
  auto graph = BuildCompatibilityDigraph(RestaurantGame());
  EXPECT_TRUE(graph.HasEdge({0, 0}, {1, 0}));
  EXPECT_FALSE(graph.HasEdge({1, 0}, {0, 0}));
  for (const auto& e : graph.edges) EXPECT_NE(e.from.player, e.to.player);
}

TEST(DigraphTest, TwoPlayerGamesCanHaveEdges) {
  // Player a's x weakly dominates y; player b coordinates.
  StrategicGame g({"a", "b"}, {{"x", "y"}, {"x", "y"}},
                  {{Rational(1), Rational(1)},
                   {Rational(0), Rational(0)},
                   {Rational(0), Rational(0)},
                   {Rational(0), Rational(1)}});
  auto graph = BuildCompatibilityDigraph(g);
  EXPECT_TRUE(graph.HasEdge({0, 0}, {1, 0}));
  EXPECT_TRUE(graph.HasEdge({0, 0}, {1, 1}));
  EXPECT_FALSE(graph.HasEdge({1, 0}, {0, 0}));
}

TEST(DigraphTest, NonInteractingIdenticalPlayers) {
  // Two players with the same payoff vector over their own strategy and no
  // interaction: U_p(x) = 1, U_p(y) = 0 is dominance, so use a payoff that
  // depends on a third player who is indifferent.
  std::mt19937_64 rng(13);
  int escapes = 0;
  for (int trial = 0; trial < 40; ++trial) {
    StrategicGame base = RandomGame(rng, {2, 2, 2}, 3);
    std::vector<RationalVector> payoffs(8, RationalVector(3));
    for (int profile = 0; profile < 8; ++profile) {
      const int a = base.StrategyAt(profile, 0);
      const int b = base.StrategyAt(profile, 1);
      const int c = base.StrategyAt(profile, 2);
      // Each of players 0 and 1 gets f(own, c) from the same table.
      payoffs[profile][0] = base.payoff(a * 4 + c, 0);
      payoffs[profile][1] = base.payoff(b * 4 + c, 0);
      payoffs[profile][2] = base.payoff(profile, 2);
    }
    StrategicGame g(base.players(), {base.strategies(0), base.strategies(1), base.strategies(2)},
                    payoffs);
    if (ValidateNoStrictDominance(g)) continue;
    auto graph = BuildCompatibilityDigraph(g);
    for (int s = 0; s < 2; ++s) {
      const bool forward = graph.HasEdge({0, s}, {1, s});
      const bool backward = graph.HasEdge({1, s}, {0, s});
      EXPECT_EQ(forward, backward);
      if (forward) {
        ExpectMutualEscape(g, {0, s}, {1, s});
        ++escapes;
      }
      // Pairwise oracle.
      EXPECT_EQ(forward, IsMoreCompatible(g, 0, s, 1, s).holds);
    }
  }
  SUCCEED() << escapes;
}

// Each verdict computed independently must respect transitivity (three
// distinct players).
TEST(CompatibilityPropertyTest, Transitivity) {
  std::mt19937_64 rng(14);
  int chains = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> counts(3);
    for (auto& c : counts) c = std::uniform_int_distribution<int>(2, 3)(rng);
    if (counts[0] * counts[1] * counts[2] > 12) counts[2] = 2;
    StrategicGame g = RandomValidatedGame(rng, counts, 3);
    auto graph = BuildCompatibilityDigraph(g);
    for (const auto& ab : graph.edges) {
      for (const auto& bc : graph.edges) {
        if (!(ab.to == bc.from) || bc.to.player == ab.from.player) continue;
        ++chains;
        EXPECT_TRUE(graph.HasEdge(ab.from, bc.to)) << "trial " << trial;
      }
    }
  }
  EXPECT_GT(chains, 0);
}

TEST(CompatibilityPropertyTest, AsymmetryUnlessBothWeaklyDominated) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> counts(3);
    for (auto& c : counts) c = std::uniform_int_distribution<int>(2, 3)(rng);
    if (counts[0] * counts[1] * counts[2] > 12) counts[2] = 2;
    StrategicGame g = RandomValidatedGame(rng, counts, 3);
    auto graph = BuildCompatibilityDigraph(g);
    for (const auto& e : graph.edges) {
      if (graph.HasEdge(e.to, e.from)) ExpectMutualEscape(g, e.from, e.to);
    }
  }
}

TEST(CompatibilityPropertyTest, RepresentationInvariance) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    StrategicGame g = RandomValidatedGame(rng, {2, 3, 2}, 3);
    StrategicGame h = g;
    for (int p = 0; p < 3; ++p) {
      Rational offset = ::pce::testing::RandomRational(rng, 6, 4);
      Rational scale = Rational(std::uniform_int_distribution<int>(1, 9)(rng)) /
                       std::uniform_int_distribution<int>(1, 4)(rng);
      h = h.AffineTransformed(p, offset, scale);
    }
    auto a = BuildCompatibilityDigraph(g);
    auto b = BuildCompatibilityDigraph(h);
    ASSERT_EQ(a.edges.size(), b.edges.size());
    for (size_t k = 0; k < a.edges.size(); ++k) {
      EXPECT_EQ(a.edges[k].from, b.edges[k].from);
      EXPECT_EQ(a.edges[k].to, b.edges[k].to);
    }
  }
}

TEST(CompatibilityPropertyTest, WitnessesVerify) {
  std::mt19937_64 rng(17);
  int witnesses = 0;
  for (int trial = 0; trial < 60; ++trial) {
    StrategicGame g = RandomValidatedGame(rng, {2, 2, 3}, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        for (int a = 0; a < g.num_strategies(i); ++a) {
          for (int b = 0; b < g.num_strategies(j); ++b) {
            auto v = IsMoreCompatible(g, i, a, j, b);
            if (v.holds) continue;
            ASSERT_TRUE(v.witness);
            EXPECT_TRUE(VerifyWitness(g, i, a, j, b, *v.witness));
            ++witnesses;
          }
        }
      }
    }
  }
  EXPECT_GT(witnesses, 100);
}

// Grid search for counterexamples in 2x2 games: any grid counterexample must
// make the verdict fail.
TEST(CompatibilityPropertyTest, GridCounterexamplesAreDetected) {
  std::mt19937_64 rng(18);
  const int steps = 8;
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    StrategicGame g = RandomValidatedGame(rng, {2, 2}, 3);
    for (int s_i = 0; s_i < 2; ++s_i) {
      for (int s_j = 0; s_j < 2; ++s_j) {
        bool j_weak_somewhere = false;
        bool i_fails_somewhere = false;
        // With two players the marginal condition is empty, so sigma and
        // sigma_tilde can be searched separately.
        for (int a = 1; a < steps; ++a) {
          for (int b = 1; b < steps - a; ++b) {
            for (int c = 1; c < steps - a - b; ++c) {
              const int d = steps - a - b - c;
              RationalVector w = {Rational(a, steps), Rational(b, steps), Rational(c, steps),
                                  Rational(d, steps)};
              for (auto& x : w) x.canonicalize();
              CorrelatedProfile sigma({0, 1}, {2, 2}, w);
              std::vector<int> just_i = {0};
              std::vector<int> just_j = {1};
              auto opp_j = Marginal(sigma, just_i);
              auto opp_i = Marginal(sigma, just_j);
              auto best = BestResponses(g, 1, opp_j);
              if (std::find(best.begin(), best.end(), s_j) != best.end()) j_weak_somewhere = true;
              if (ExpectedUtility(g, 0, 1 - s_i, opp_i) >= ExpectedUtility(g, 0, s_i, opp_i)) {
                i_fails_somewhere = true;
              }
            }
          }
        }
        if (j_weak_somewhere && i_fails_somewhere) {
          ++found;
          EXPECT_FALSE(IsMoreCompatible(g, 0, s_i, 1, s_j).holds);
        }
      }
    }
  }
  EXPECT_GT(found, 20);
}

MixedProfile Pooling(const SignalingGame& sg, int signal, int plan) {
  MixedProfile m;
  for (int t = 0; t < sg.num_types(); ++t) {
    RationalVector v(sg.num_signals(), Rational(0));
    v[signal] = 1;
    m.push_back(v);
  }
  RationalVector r(NumPlans(sg), Rational(0));
  r[plan] = 1;
  m.push_back(r);
  return m;
}

TEST(CriterionTest, BeerPoolingPasses) {
  SignalingGame sg = BeerQuiche();
  // Spare after beer, duel after quiche.
  auto eq = Pooling(sg, 0, EncodePlan(sg, {1, 0}));
  auto result = CheckCompatibilityCriterion(sg, eq);
  EXPECT_TRUE(result.passes);
}

TEST(CriterionTest, QuichePoolingFails) {
  SignalingGame sg = BeerQuiche();
  auto eq = Pooling(sg, 1, EncodePlan(sg, {0, 1}));
  auto result = CheckCompatibilityCriterion(sg, eq);
  EXPECT_FALSE(result.passes);
  ASSERT_EQ(result.failures.size(), 1u);
  EXPECT_EQ(result.failures[0].signal, 0);
  EXPECT_EQ(result.failures[0].action, 0);
}

TEST(CriterionTest, SeparatingEquilibriumPasses) {
  // Breakfast preference outweighs the duel.
  SignalingGame sg = BeerQuiche();
  for (int t = 0; t < 2; ++t)
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) {
        const bool preferred = (t == 0 && s == 0) || (t == 1 && s == 1);
        sg.sender_payoff[t][s][a] = (preferred ? 3 : 0) + (a == 1 ? 2 : 0);
      }
  MixedProfile eq = {{Rational(1), Rational(0)},
                     {Rational(0), Rational(1)},
                     RationalVector(4, Rational(0))};
  eq[2][EncodePlan(sg, {1, 0})] = 1;
  auto result = CheckCompatibilityCriterion(sg, eq);
  EXPECT_TRUE(result.passes);
}

TEST(CriterionTest, RejectsNonEquilibrium) {
  SignalingGame sg = BeerQuiche();
  // Pooling on beer while the receiver duels after beer.
  auto eq = Pooling(sg, 0, EncodePlan(sg, {0, 0}));
  EXPECT_THROW(CheckCompatibilityCriterion(sg, eq), PreconditionError);
}

}  // namespace
}  // namespace pce
