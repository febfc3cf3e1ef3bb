#include "pce/compatibility.h"

#include <algorithm>

#include "pce/errors.h"
#include "pce/lp.h"

namespace pce {
namespace {

// Key of a profile's restriction to the players other than i and j.
int ThirdPartyKey(const StrategicGame& game, int profile, int i, int j) {
  int key = 0;
  for (int p = 0; p < game.num_players(); ++p) {
    if (p == i || p == j) continue;
    key = key * game.num_strategies(p) + game.StrategyAt(profile, p);
  }
  return key;
}

int NumThirdPartyKeys(const StrategicGame& game, int i, int j) {
  int n = 1;
  for (int p = 0; p < game.num_players(); ++p) {
    if (p != i && p != j) n *= game.num_strategies(p);
  }
  return n;
}

// Row over a block of |S| variables starting at `offset` in a vector of
// width `width`: sum_s sigma(s) [U_p(a, s_-p) - U_p(b, s_-p)].
RationalVector GainRow(const StrategicGame& game, int p, int a, int b, int offset, int width) {
  RationalVector row(width, Rational(0));
  for (int profile = 0; profile < game.num_profiles(); ++profile) {
    const int own = game.StrategyAt(profile, p);
    const int base = profile - own * game.stride(p);
    row[offset + profile] = game.payoff(base + a * game.stride(p), p) -
                            game.payoff(base + b * game.stride(p), p);
  }
  return row;
}

RationalVector SimplexRow(int offset, int n, int width) {
  RationalVector row(width, Rational(0));
  for (int k = 0; k < n; ++k) row[offset + k] = 1;
  return row;
}

void AddWeakOptimality(LinearProgram& lp, const StrategicGame& game, int j, int s_j, int offset) {
  for (int other = 0; other < game.num_strategies(j); ++other) {
    if (other == s_j) continue;
    lp.AddConstraint(GainRow(game, j, s_j, other, offset, lp.num_variables()),
                     Relation::kGreaterEqual, Rational(0));
  }
}

void CheckArguments(const StrategicGame& game, int i, int s_i, int j, int s_j) {
  if (i == j) throw PreconditionError("compatibility compares two different players");
  if (i < 0 || j < 0 || i >= game.num_players() || j >= game.num_players()) {
    throw PreconditionError("player index out of range");
  }
  if (s_i < 0 || s_i >= game.num_strategies(i) || s_j < 0 || s_j >= game.num_strategies(j)) {
    throw PreconditionError("strategy index out of range");
  }
}

void RequireNoStrictDominance(const StrategicGame& game) {
  if (auto bad = ValidateNoStrictDominance(game)) {
    throw PreconditionError("strategy '" + game.strategies(bad->player)[bad->strategy] +
                            "' of player '" + game.player(bad->player) +
                            "' is strictly dominated");
  }
}

CompatibilityVerdict Decide(const StrategicGame& game, int i, int s_i, int j, int s_j) {
  const int n = game.num_profiles();
  const int width = 2 * n;
  CompatibilityVerdict verdict;
  std::vector<int> sigma_coords(n);
  for (int k = 0; k < n; ++k) sigma_coords[k] = k;

  {
    LinearProgram region(n);
    region.AddConstraint(SimplexRow(0, n, n), Relation::kEqual, Rational(1));
    AddWeakOptimality(region, game, j, s_j, 0);
    auto interior = MaxMinCoordinate(region, sigma_coords);
    verdict.vacuous = !interior || interior->delta <= 0;
  }
  if (verdict.vacuous) return verdict;

  LinearProgram base(width);
  base.AddConstraint(SimplexRow(0, n, width), Relation::kEqual, Rational(1));
  base.AddConstraint(SimplexRow(n, n, width), Relation::kEqual, Rational(1));
  AddWeakOptimality(base, game, j, s_j, 0);
  std::vector<RationalVector> marginal_rows(NumThirdPartyKeys(game, i, j),
                                            RationalVector(width, Rational(0)));
  for (int profile = 0; profile < n; ++profile) {
    const int key = ThirdPartyKey(game, profile, i, j);
    marginal_rows[key][profile] += 1;
    marginal_rows[key][n + profile] -= 1;
  }
  for (auto& row : marginal_rows) base.AddConstraint(std::move(row), Relation::kEqual, Rational(0));

  std::vector<int> all_coords(width);
  for (int k = 0; k < width; ++k) all_coords[k] = k;
  for (int deviation = 0; deviation < game.num_strategies(i); ++deviation) {
    if (deviation == s_i) continue;
    LinearProgram lp = base;
    lp.AddConstraint(GainRow(game, i, deviation, s_i, n, width), Relation::kGreaterEqual,
                     Rational(0));
    auto result = MaxMinCoordinate(lp, all_coords);
    if (result && result->delta > 0) {
      verdict.holds = false;
      RationalVector sigma(result->point.begin(), result->point.begin() + n);
      RationalVector sigma_tilde(result->point.begin() + n, result->point.end());
      std::vector<int> players(game.num_players());
      for (int p = 0; p < game.num_players(); ++p) players[p] = p;
      verdict.witness = CompatibilityWitness{
          CorrelatedProfile(players, game.strategy_counts(), std::move(sigma)),
          CorrelatedProfile(players, game.strategy_counts(), std::move(sigma_tilde)), deviation};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace

CompatibilityVerdict IsMoreCompatible(const StrategicGame& game, int i, int s_i, int j, int s_j,
                                      const CompatibilityOptions& options) {
  CheckArguments(game, i, s_i, j, s_j);
  if (options.validate) RequireNoStrictDominance(game);
  return Decide(game, i, s_i, j, s_j);
}

bool VerifyWitness(const StrategicGame& game, int i, int s_i, int j, int s_j,
                   const CompatibilityWitness& w) {
  if (!w.sigma.IsTotallyMixed() || !w.sigma_tilde.IsTotallyMixed()) return false;
  std::vector<int> third;
  for (int p = 0; p < game.num_players(); ++p) {
    if (p != i && p != j) third.push_back(p);
  }
  if (!third.empty() &&
      Marginal(w.sigma, third).weights() != Marginal(w.sigma_tilde, third).weights()) {
    return false;
  }
  auto opponents_j = Opponents(game, j);
  auto opponents_i = Opponents(game, i);
  const auto sigma_j = Marginal(w.sigma, opponents_j);
  const auto tilde_i = Marginal(w.sigma_tilde, opponents_i);
  const auto best_j = BestResponses(game, j, sigma_j);
  if (std::find(best_j.begin(), best_j.end(), s_j) == best_j.end()) return false;
  return ExpectedUtility(game, i, w.deviation, tilde_i) >= ExpectedUtility(game, i, s_i, tilde_i);
}

bool CompatibilityDigraph::HasEdge(StrategyRef from, StrategyRef to) const {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const CompatibilityEdge& e) { return e.from == from && e.to == to; });
}

int CompatibilityDigraph::NodeIndex(StrategyRef node) const {
  auto it = std::find(nodes.begin(), nodes.end(), node);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

CompatibilityDigraph BuildCompatibilityDigraph(const StrategicGame& game) {
  RequireNoStrictDominance(game);
  CompatibilityDigraph graph;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int s = 0; s < game.num_strategies(i); ++s) graph.nodes.push_back({i, s});
  }
  for (const auto& from : graph.nodes) {
    for (const auto& to : graph.nodes) {
      if (from.player == to.player) continue;
      auto verdict = Decide(game, from.player, from.strategy, to.player, to.strategy);
      if (verdict.holds) graph.edges.push_back({from, to, verdict.vacuous});
    }
  }
  return graph;
}

Rational BehavioralResponse(const SignalingGame& sg, const RationalVector& plan_mix, int signal,
                            int action) {
  Rational total = 0;
  for (int plan = 0; plan < static_cast<int>(plan_mix.size()); ++plan) {
    if (DecodePlan(sg, plan)[signal] == action) total += plan_mix[plan];
  }
  return total;
}

CriterionResult CheckCompatibilityCriterion(const SignalingGame& sg, const MixedProfile& eq) {
  const StrategicGame game = SignalingToStrategic(sg);
  const int n_types = sg.num_types();
  if (!IsNash(game, eq)) throw PreconditionError("profile is not a Nash equilibrium");
  const RationalVector& plan_mix = eq[n_types];

  // Equilibrium payoff of each type.
  RationalVector eq_payoff(n_types);
  for (int t = 0; t < n_types; ++t) {
    const RationalVector values = PayoffVector(game, t, eq);
    for (int s = 0; s < sg.num_signals(); ++s) {
      if (sgn(eq[t][s]) > 0) eq_payoff[t] = values[s];
    }
  }

  CriterionResult result;
  for (int s = 0; s < sg.num_signals(); ++s) {
    bool on_path = false;
    for (int t = 0; t < n_types; ++t) on_path = on_path || sgn(eq[t][s]) > 0;
    // Bayes' rule pins beliefs on path, and Nash makes every supported
    // action a best response to them.
    if (on_path) continue;

    // Ratio restrictions p(t') / p(t) <= prior(t') / prior(t).
    std::vector<std::pair<int, int>> restrictions;
    for (int t = 0; t < n_types; ++t) {
      Rational best = *std::max_element(sg.sender_payoff[t][s].begin(),
                                        sg.sender_payoff[t][s].end());
      if (!(best > eq_payoff[t])) continue;  // equilibrium dominated for t
      for (int u = 0; u < n_types; ++u) {
        if (u == t) continue;
        CompatibilityOptions options;
        options.validate = false;
        if (IsMoreCompatible(game, t, s, u, s, options).holds) restrictions.push_back({t, u});
      }
    }
    for (int a = 0; a < sg.num_actions(); ++a) {
      if (sgn(BehavioralResponse(sg, plan_mix, s, a)) == 0) continue;
      LinearProgram lp(n_types);
      lp.AddConstraint(RationalVector(n_types, Rational(1)), Relation::kEqual, Rational(1));
      for (int other = 0; other < sg.num_actions(); ++other) {
        if (other == a) continue;
        RationalVector row(n_types);
        for (int t = 0; t < n_types; ++t) {
          row[t] = sg.receiver_payoff[t][s][a] - sg.receiver_payoff[t][s][other];
        }
        lp.AddConstraint(std::move(row), Relation::kGreaterEqual, Rational(0));
      }
      for (auto [t, u] : restrictions) {
        // prior(t) p(u) - prior(u) p(t) <= 0
        RationalVector row(n_types, Rational(0));
        row[u] = sg.prior[t];
        row[t] = -sg.prior[u];
        lp.AddConstraint(std::move(row), Relation::kLessEqual, Rational(0));
      }
      if (std::holds_alternative<LpInfeasible>(SolveExact(lp))) {
        result.passes = false;
        result.failures.push_back(
            {s, a,
             "no belief respecting the type-compatibility restrictions makes '" +
                 sg.actions[a] + "' a best response to off-path signal '" + sg.signals[s] + "'"});
      }
    }
  }
  return result;
}

}  // namespace pce
