#include "pce/learning.h"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "pce/errors.h"
#include "pce/special_functions.h"
#include "pce/standard_games.h"

namespace pce {
namespace {

constexpr int kCritic = 0;
constexpr int kDiner = 1;
constexpr int kR = 0;

// Player 0 picks Out or In; after In it earns 1 if player 1 plays a and 0
// if b. Out is listed first so that a tie keeps the agent out.
ExtensiveGame OptInGame() {
  std::vector<RationalVector> payoffs = {
      {Rational(0), Rational(0)}, {Rational(0), Rational(0)},
      {Rational(1), Rational(0)}, {Rational(0), Rational(0)}};
  return SimultaneousTree(StrategicGame({"agent", "other"}, {{"Out", "In"}, {"a", "b"}}, payoffs));
}

// Two agents with identical stakes in a third player's move.
ExtensiveGame TwinGame() {
  std::vector<RationalVector> payoffs;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const int u = c == 0 ? 2 : -1;
        payoffs.push_back({Rational(a == 0 ? u : 0), Rational(b == 0 ? u : 0), Rational(0)});
      }
  return SimultaneousTree(
      StrategicGame({"A", "B", "C"}, {{"In", "Out"}, {"In", "Out"}, {"x", "y"}}, payoffs));
}

ExtensiveGame ProductGame() {
  std::vector<RationalVector> payoffs;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const int x = b == 0 ? 1 : 2, y = c == 0 ? 1 : 3;
        payoffs.push_back({Rational(a == 0 ? x * y : 0), Rational(b), Rational(c)});
      }
  return SimultaneousTree(StrategicGame({"a", "b", "c"}, {{"In", "Out"}, {"p", "m"}, {"p", "m"}}, payoffs));
}

double Half(int) { return 0.5; }

class ConstantPolicy : public IndexPolicy {
 public:
  double Index(int, const ArmState&) const override { return 3; }
  std::string Name() const override { return "constant"; }
};

TEST(LearningProblemTest, RestaurantArms) {
  LearningProblem critic(RestaurantTree(), kCritic);
  EXPECT_EQ(critic.relevant(kR).size(), 2u);
  EXPECT_TRUE(critic.relevant(1).empty());
  EXPECT_EQ(critic.num_outcomes(kR), 4);
  ASSERT_TRUE(critic.auxiliary().has_value());
  // H with the diner in: 1 + 1 - 1/2.
  EXPECT_DOUBLE_EQ(critic.Payoff(kR, critic.EncodeOutcome(kR, {0, 0})), 1.5);
  EXPECT_THROW(LearningProblem(CentipedeTree(), 0), PreconditionError);
}

TEST(BayesUcbTest, SpecExamples) {
  const ExtensiveGame g = OptInGame();
  LearningProblem problem(g, 0);
  const BeliefState prior = BeliefState::Uniform(g, 0);
  History y;
  EXPECT_NEAR(BayesUcbIndex(problem, prior, 1, y, Half), 0.5, 1e-12);
  EXPECT_EQ(BayesUcbIndex(problem, prior, 0, y, Half), 0.0);
  y.Append({1, {0}});
  EXPECT_NEAR(BayesUcbIndex(problem, prior, 1, y, Half), std::sqrt(0.5), 1e-12);
  EXPECT_EQ(y.Count(1), 1);
  EXPECT_EQ(y.Subhistory(0).size(), 0u);
}

TEST(BayesUcbTest, Preconditions) {
  const ExtensiveGame g = OptInGame();
  LearningProblem problem(g, 0);
  const BeliefState prior = BeliefState::Uniform(g, 0);
  EXPECT_THROW(BayesUcbIndex(problem, prior, 1, History(), [](int) { return 1.0; }),
               PreconditionError);
  EXPECT_THROW(BayesUcbIndex(problem, prior, 1, History(), [](int) { return 0.0; }),
               PreconditionError);
  const ExtensiveGame product = ProductGame();
  LearningProblem p(product, 0);
  EXPECT_FALSE(p.auxiliary().has_value());
  EXPECT_THROW(BayesUcbPolicy(p, BeliefState::Uniform(product, 0)), PreconditionError);
  BeliefState bad = prior;
  bad.counts.begin()->second[0] = 0;
  EXPECT_THROW(BayesUcbPolicy(problem, bad), std::invalid_argument);
}

TEST(BayesUcbTest, SingletonSetsReduceToStandardIndex) {
  const ExtensiveGame g = OptInGame();
  LearningProblem problem(g, 0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> count(0.2, 8);
  std::uniform_int_distribution<int> obs(0, 12);
  for (int trial = 0; trial < 200; ++trial) {
    BeliefState prior = BeliefState::Uniform(g, 0);
    auto& c = prior.counts.begin()->second;
    c = {count(rng), count(rng)};
    ArmState arm = ArmState::Empty(problem, 1);
    const int na = obs(rng), nb = obs(rng);
    arm.plays = na + nb;
    arm.counts[0] = {na, nb};
    const BayesUcbPolicy policy(problem, prior);
    const double q = DefaultQuantile(arm.plays);
    const double standard = BetaQuantile(c[0] + na, c[1] + nb, q);
    EXPECT_NEAR(policy.Index(1, arm), standard, 1e-12);
  }
}

TEST(BayesUcbTest, RestaurantIndicesAddQuantiles) {
  const ExtensiveGame g = RestaurantTree();
  LearningProblem critic(g, kCritic);
  LearningProblem diner(g, kDiner);
  const BayesUcbPolicy pc(critic, BeliefState::Uniform(g, kCritic), Half);
  const BayesUcbPolicy pd(diner, BeliefState::Uniform(g, kDiner), Half);
  // Medians: food -2 + 3 * 0.5, crowd -0.5 * 0.5; the critic adds 1.
  EXPECT_NEAR(pd.Index(kR, ArmState::Empty(diner, kR)), -0.75, 1e-12);
  EXPECT_NEAR(pc.Index(kR, ArmState::Empty(critic, kR)), 0.25, 1e-12);
  EXPECT_EQ(pc.Index(1, ArmState::Empty(critic, 1)), 0.0);
}

TEST(GittinsTest, MyopicDiscountGivesMean) {
  const ExtensiveGame g = RestaurantTree();
  LearningProblem critic(g, kCritic);
  const std::vector<std::vector<double>> posterior = {{2, 1}, {1, 3}};
  double mean = 0;
  for (int o = 0; o < critic.num_outcomes(kR); ++o) {
    const auto a = critic.DecodeOutcome(kR, o);
    mean += posterior[0][a[0]] / 3 * posterior[1][a[1]] / 4 * critic.Payoff(kR, o);
  }
  EXPECT_NEAR(GittinsIndex(critic, kR, posterior, 0, 10).index, mean, 1e-12);
  EXPECT_EQ(GittinsIndex(critic, 1, {}, 0.9, 10).index, 0.0);
}

TEST(GittinsTest, KnownPlayHasNoInformationValue) {
  const ExtensiveGame g = OptInGame();
  LearningProblem problem(g, 0);
  const double big = 1e12;
  for (double beta : {0.5, 0.9}) {
    const auto r = GittinsIndex(problem, 1, {{0.3 * big, 0.7 * big}}, beta, 25);
    EXPECT_NEAR(r.index, 0.3, 1e-9);
  }
}

// sup over stopping rules 1 <= tau <= depth of E[sum beta^t u] / E[sum beta^t]
// for a Bernoulli reward with a Beta(a, b) prior. Every deterministic rule
// is a continue bit per history of length 1..depth-1.
double BruteForceGittins(double a, double b, double beta, int depth) {
  std::vector<int> offset(depth + 1, 0);
  int bits = 0;
  for (int len = 1; len < depth; ++len) {
    offset[len] = bits;
    bits += 1 << len;
  }
  double best = -1;
  for (long rule = 0; rule < (1L << bits); ++rule) {
    std::function<std::pair<double, double>(int, int, double, double)> play =
        [&](int len, int mask, double sa, double sb) -> std::pair<double, double> {
      const double p = sa / (sa + sb);
      const double disc = std::pow(beta, len);
      double num = disc * p;
      double den = disc;
      if (len + 1 < depth) {
        for (int outcome = 0; outcome < 2; ++outcome) {
          const int next = mask | (outcome == 0 ? 1 << len : 0);
          if (!((rule >> (offset[len + 1] + next)) & 1)) continue;
          const double q = outcome == 0 ? p : 1 - p;
          const auto [cn, cd] = play(len + 1, next, sa + (outcome == 0), sb + (outcome == 1));
          num += q * cn;
          den += q * cd;
        }
      }
      return {num, den};
    };
    const auto [num, den] = play(0, 0, a, b);
    best = std::max(best, num / den);
  }
  return best;
}

TEST(GittinsTest, MatchesStoppingRuleEnumeration) {
  const ExtensiveGame g = OptInGame();
  LearningProblem problem(g, 0);
  const double oracle = BruteForceGittins(1, 1, 0.5, 4);
  EXPECT_NEAR(GittinsIndex(problem, 1, {{1, 1}}, 0.5, 4).index, oracle, 1e-12);
  const auto deep = GittinsIndex(problem, 1, {{1, 1}}, 0.5, 12);
  const double bound_at_4 = std::pow(0.5, 4) / 0.5;
  EXPECT_GE(deep.index, oracle - 1e-12);
  EXPECT_LE(deep.index - oracle, bound_at_4);
  EXPECT_NEAR(deep.truncation_bound, std::pow(0.5, 12) / 0.5, 1e-15);
  for (auto [a, b] : std::vector<std::pair<double, double>>{{2, 1}, {1, 3}, {0.5, 0.5}}) {
    EXPECT_NEAR(GittinsIndex(problem, 1, {{a, b}}, 0.7, 3).index, BruteForceGittins(a, b, 0.7, 3),
                1e-12);
  }
}

TEST(GittinsTest, TabulatedBernoulliValue) {
  const ExtensiveGame g = OptInGame();
  LearningProblem problem(g, 0);
  // Gittins' tables: Beta(1, 1) at discount 0.9 has index 0.7029.
  EXPECT_NEAR(GittinsIndex(problem, 1, {{1, 1}}, 0.9, 250).index, 0.7029, 1e-4);
}

TEST(GittinsTest, MonotoneInHorizon) {
  const ExtensiveGame g = OptInGame();
  LearningProblem problem(g, 0);
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 1}, {2, 1}, {1, 3}, {5, 2}}) {
    for (double beta : {0.5, 0.9}) {
      double previous = -1;
      for (int horizon = 1; horizon <= 16; ++horizon) {
        const double index = GittinsIndex(problem, 1, {{a, b}}, beta, horizon).index;
        EXPECT_GE(index, previous - 1e-12) << a << "," << b << " beta " << beta << " T " << horizon;
        previous = index;
      }
    }
  }
}

TEST(ResponsePathTest, DeterministicWithCorrectMarginals) {
  const ExtensiveGame g = RestaurantTree();
  const MixedProfile sigma = RestaurantEnvironment();
  const ResponsePath path(g, sigma, 42);
  const ResponsePath again(g, sigma, 42);
  const ResponsePath other(g, sigma, 43);
  const int restaurant_set = 2;
  const int n = 40000;
  int high = 0;
  int differ = 0;
  for (int t = 1; t <= n; ++t) {
    const int a = path.Action(restaurant_set, t);
    EXPECT_EQ(a, again.Action(restaurant_set, t));
    differ += a != other.Action(restaurant_set, t);
    high += a == 0;
  }
  const double se = std::sqrt(2.0 / 9 / n);
  EXPECT_NEAR(static_cast<double>(high) / n, 2.0 / 3, 4 * se);
  EXPECT_GT(differ, 0);
  EXPECT_THROW(path.Action(restaurant_set, 0), std::invalid_argument);
}

TEST(RunPolicyTest, ConstantIndexPlaysFirstStrategy) {
  const ExtensiveGame g = RestaurantTree();
  LearningProblem critic(g, kCritic);
  const ResponsePath path(g, RestaurantEnvironment(), 1);
  const auto y = RunPolicy(critic, ConstantPolicy(), path, 30);
  EXPECT_EQ(y.Strategies(), std::vector<int>(30, 0));
}

TEST(RunPolicyTest, OptimisticPriorExperimentsFirst) {
  const ExtensiveGame g = OptInGame();
  LearningProblem problem(g, 0);
  BeliefState prior = BeliefState::Uniform(g, 0);
  prior.counts.begin()->second = {3, 1};
  const BayesUcbPolicy policy(problem, prior);
  EXPECT_EQ(policy.Index(0, ArmState::Empty(problem, 0)), 0.0);
  EXPECT_GT(policy.Index(1, ArmState::Empty(problem, 1)), 0.0);
  const MixedProfile sigma = {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 5), Rational(4, 5)}};
  const ResponsePath path(g, sigma, 5);
  const auto y = RunPolicy(problem, policy, path, 50);
  EXPECT_EQ(y.entries().front().strategy, 1);
  const auto z = RunPolicy(problem, BayesUcbPolicy(problem, prior), path, 50);
  EXPECT_EQ(y.Strategies(), z.Strategies());
  // The k-th play of In observes a_{k,h}.
  int k = 0;
  for (const auto& e : y.entries()) {
    if (e.strategy != 1) continue;
    ++k;
    EXPECT_EQ(e.actions[0], path.Action(problem.relevant(1)[0], k));
  }
}

TEST(InducedResponseTest, MyopicAgentIsPointMass) {
  const ExtensiveGame g = RestaurantTree();
  LearningProblem critic(g, kCritic);
  const BayesUcbPolicy policy(critic, BeliefState::Uniform(g, kCritic));
  for (auto method : {ResponseMethod::kExactHorizon, ResponseMethod::kMonteCarlo}) {
    const auto r = ComputeInducedResponse(critic, policy, RestaurantEnvironment(), 0, method,
                                          HorizonFor(0), 50);
    EXPECT_EQ(r.probabilities, (std::vector<double>{1, 0}));
  }
  EXPECT_THROW(ComputeInducedResponse(critic, policy, RestaurantEnvironment(), 1,
                                      ResponseMethod::kExactHorizon, 5),
               std::invalid_argument);
  EXPECT_THROW(ComputeInducedResponse(critic, policy, RestaurantEnvironment(), 0.5,
                                      ResponseMethod::kMonteCarlo, 5, 0),
               std::invalid_argument);
  EXPECT_THROW(ComputeInducedResponse(critic, policy, RestaurantEnvironment(), 0.5,
                                      ResponseMethod::kExactHorizon, 0),
               std::invalid_argument);
}

TEST(InducedResponseTest, ExactAgreesWithMonteCarlo) {
  const ExtensiveGame g = RestaurantTree();
  const MixedProfile sigma = RestaurantEnvironment();
  for (int player : {kCritic, kDiner}) {
    LearningProblem problem(g, player);
    BeliefState prior = BeliefState::Uniform(g, player);
    prior.counts[2] = {3, 1};  // optimistic about the food, so both experiment
    const BayesUcbPolicy policy(problem, prior);
    const auto exact =
        ComputeInducedResponse(problem, policy, sigma, 0.9, ResponseMethod::kExactHorizon, 40);
    const auto mc =
        ComputeInducedResponse(problem, policy, sigma, 0.9, ResponseMethod::kMonteCarlo, 40, 10000);
    double total = 0;
    for (int s = 0; s < 2; ++s) {
      total += exact.probabilities[s];
      // 1/paths covers events too rare to show up in the sample at all.
      EXPECT_NEAR(exact.probabilities[s], mc.probabilities[s], 3 * mc.standard_errors[s] + 1e-4)
          << "player " << player << " strategy " << s;
    }
    EXPECT_NEAR(total, 1, exact.truncation_bound + 1e-12);
    EXPECT_NEAR(exact.truncation_bound, std::pow(0.9, 40), 1e-15);
  }
}

// Random matching: each period fresh opponent strategies are drawn from
// sigma and the agent sees their actions on F_i[s].
std::vector<double> RandomMatchingResponse(const LearningProblem& problem,
                                           const IndexPolicy& policy, const MixedProfile& sigma,
                                           double gamma, int horizon, int runs,
                                           std::vector<double>* se) {
  const ExtensiveGame& g = problem.game();
  std::mt19937_64 rng(2024);
  std::vector<std::discrete_distribution<int>> draw;
  for (const auto& row : sigma) {
    std::vector<double> w;
    for (const auto& x : row) w.push_back(x.get_d());
    draw.emplace_back(w.begin(), w.end());
  }
  const int n = problem.num_strategies();
  std::vector<double> sum(n, 0), sum_sq(n, 0);
  for (int run = 0; run < runs; ++run) {
    std::vector<ArmState> arms;
    for (int s = 0; s < n; ++s) arms.push_back(ArmState::Empty(problem, s));
    std::vector<double> freq(n, 0);
    double weight = 1 - gamma;
    for (int t = 0; t < horizon; ++t) {
      std::vector<int> pure(g.num_players());
      for (int p = 0; p < g.num_players(); ++p) pure[p] = draw[p](rng);
      const ActionProfile profile = g.ToActionProfile(pure);
      const int s = ChooseStrategy(policy, arms);
      std::vector<int> actions;
      for (int h : problem.relevant(s)) actions.push_back(profile[h]);
      arms[s].Observe(actions);
      freq[s] += weight;
      weight *= gamma;
    }
    for (int s = 0; s < n; ++s) {
      sum[s] += freq[s];
      sum_sq[s] += freq[s] * freq[s];
    }
  }
  std::vector<double> mean(n);
  se->assign(n, 0);
  for (int s = 0; s < n; ++s) {
    mean[s] = sum[s] / runs;
    const double var = (sum_sq[s] - runs * mean[s] * mean[s]) / (runs - 1);
    (*se)[s] = std::sqrt(std::max(0.0, var) / runs);
  }
  return mean;
}

TEST(InducedResponseTest, ResponsePathsMatchRandomMatching) {
  const ExtensiveGame g = RestaurantTree();
  const MixedProfile sigma = RestaurantEnvironment();
  for (int player : {kCritic, kDiner}) {
    LearningProblem problem(g, player);
    BeliefState prior = BeliefState::Uniform(g, player);
    prior.counts[2] = {3, 1};
    const BayesUcbPolicy policy(problem, prior);
    const auto coupled =
        ComputeInducedResponse(problem, policy, sigma, 0.8, ResponseMethod::kMonteCarlo, 80, 6000);
    std::vector<double> se;
    const auto matched = RandomMatchingResponse(problem, policy, sigma, 0.8, 80, 6000, &se);
    for (int s = 0; s < 2; ++s) {
      const double combined = std::hypot(se[s], coupled.standard_errors[s]);
      EXPECT_NEAR(coupled.probabilities[s], matched[s], 3 * combined + 1e-12);
    }
  }
}

TEST(CoupledCompareTest, SymmetricRolesAreIdentical) {
  const ExtensiveGame g = TwinGame();
  LearningProblem a(g, 0);
  LearningProblem b(g, 1);
  const BayesUcbPolicy pa(a, BeliefState::Uniform(g, 0));
  const BayesUcbPolicy pb(b, BeliefState::Uniform(g, 1));
  const MixedProfile sigma = {{Rational(1, 2), Rational(1, 2)},
                              {Rational(1, 2), Rational(1, 2)},
                              {Rational(1, 3), Rational(2, 3)}};
  const auto ab = CoupledCompare(a, pa, b, pb, 0, sigma, 0.9, 500, 100, 3);
  const auto ba = CoupledCompare(b, pb, a, pa, 0, sigma, 0.9, 500, 100, 3);
  EXPECT_EQ(ab.dominated_paths, 500);
  EXPECT_EQ(ba.dominated_paths, 500);
  EXPECT_EQ(ab.freq_i, ab.freq_j);
  EXPECT_GT(ab.freq_i, 0);
}

TEST(CoupledCompareTest, RestaurantCriticDominatesDiner) {
  const ExtensiveGame g = RestaurantTree();
  const MixedProfile sigma = RestaurantEnvironment();
  LearningProblem critic(g, kCritic);
  LearningProblem diner(g, kDiner);
  for (bool optimistic : {false, true}) {
    BeliefState pc = BeliefState::Uniform(g, kCritic);
    BeliefState pd = BeliefState::Uniform(g, kDiner);
    if (optimistic) pc.counts[2] = pd.counts[2] = {3, 1};
    const BayesUcbPolicy ucb_c(critic, pc);
    const BayesUcbPolicy ucb_d(diner, pd);
    const auto r = CoupledCompare(critic, ucb_c, diner, ucb_d, kR, sigma, 0.9, 2000, 150, 9);
    EXPECT_EQ(r.strategy_j, kR);
    EXPECT_EQ(r.dominated_paths, r.paths) << "first violation on path " << r.first_violation;
    EXPECT_GE(r.freq_i, r.freq_j);
    const GittinsPolicy opt_c(critic, pc, 0.81);
    const GittinsPolicy opt_d(diner, pd, 0.81);
    const auto o = CoupledCompare(critic, opt_c, diner, opt_d, kR, sigma, 0.9, 300, 100, 9);
    EXPECT_EQ(o.dominated_paths, o.paths);
    EXPECT_GE(o.freq_i, o.freq_j);
    if (optimistic) {
      EXPECT_GT(r.freq_j, 0);  // the diner experiments too
    }
  }
}

TEST(CoupledCompareTest, RejectsNonIsomorphicPair) {
  const ExtensiveGame g = LinkTree(LinkVersion::kAntiMonotonic);
  LearningProblem n1(g, 0);
  LearningProblem s1(g, 2);
  const BayesUcbPolicy p1(n1, BeliefState::Uniform(g, 0));
  const BayesUcbPolicy p2(s1, BeliefState::Uniform(g, 2));
  const Rational h(1, 2);
  const MixedProfile sigma(4, RationalVector{h, h});
  EXPECT_THROW(CoupledCompare(n1, p1, s1, p2, 0, sigma, 0.5, 10, 10), PreconditionError);
  LearningProblem n2(g, 1);
  const BayesUcbPolicy p3(n2, BeliefState::Uniform(g, 1));
  EXPECT_THROW(CoupledCompare(n1, p1, n2, p3, 0, sigma, 0.5, 0, 10), std::invalid_argument);
}

}  // namespace
}  // namespace pce
