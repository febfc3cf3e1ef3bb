#ifndef PCE_STRATEGIC_GAME_H_
#define PCE_STRATEGIC_GAME_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pce/rational.h"

namespace pce {

// Finite game in strategic form with a dense exact payoff tensor.
//
// Pure profiles are indexed in mixed radix with player 0 most significant:
// index = sum_p s_p * stride(p).
class StrategicGame {
 public:
  // payoffs[profile][player]. Throws std::invalid_argument when the table is
  // not total, a player has fewer than two strategies, or names repeat.
  StrategicGame(std::vector<std::string> players, std::vector<std::vector<std::string>> strategies,
                std::vector<RationalVector> payoffs);

  int num_players() const { return static_cast<int>(players_.size()); }
  const std::vector<std::string>& players() const { return players_; }
  const std::string& player(int i) const { return players_.at(i); }
  int num_strategies(int i) const { return static_cast<int>(strategies_.at(i).size()); }
  const std::vector<std::string>& strategies(int i) const { return strategies_.at(i); }
  std::vector<int> strategy_counts() const;
  int num_profiles() const { return static_cast<int>(payoffs_.size()); }
  int stride(int i) const { return strides_[i]; }

  const Rational& payoff(int profile, int i) const { return payoffs_[profile][i]; }
  double payoff_double(int profile, int i) const { return payoffs_double_[profile][i]; }
  const std::vector<RationalVector>& payoff_table() const { return payoffs_; }

  int ProfileIndex(std::span<const int> strategies) const;
  std::vector<int> ProfileStrategies(int profile) const;
  int StrategyAt(int profile, int i) const { return (profile / strides_[i]) % num_strategies(i); }

  // -1 when absent.
  int PlayerIndex(const std::string& name) const;
  int StrategyIndex(int i, const std::string& name) const;

  // Same game with player i's payoffs replaced by offset + scale * U_i.
  StrategicGame AffineTransformed(int i, const Rational& offset, const Rational& scale) const;

 private:
  std::vector<std::string> players_;
  std::vector<std::vector<std::string>> strategies_;
  std::vector<int> strides_;
  std::vector<RationalVector> payoffs_;
  std::vector<std::vector<double>> payoffs_double_;
};

// Distribution over the pure profiles of a player subset. Players are kept
// in increasing order; weights use the same mixed radix as StrategicGame,
// restricted to the subset.
class CorrelatedProfile {
 public:
  // Throws std::invalid_argument when weights are negative, do not sum to 1,
  // or have the wrong length.
  CorrelatedProfile(std::vector<int> players, std::vector<int> counts, RationalVector weights);

  static CorrelatedProfile Uniform(std::vector<int> players, std::vector<int> counts);
  static CorrelatedProfile PointMass(std::vector<int> players, std::vector<int> counts,
                                     std::span<const int> strategies);

  const std::vector<int>& players() const { return players_; }
  const std::vector<int>& counts() const { return counts_; }
  const RationalVector& weights() const { return weights_; }
  int size() const { return static_cast<int>(weights_.size()); }

  bool IsTotallyMixed() const;
  int Index(std::span<const int> strategies) const;
  std::vector<int> Strategies(int index) const;

 private:
  std::vector<int> players_;
  std::vector<int> counts_;
  RationalVector weights_;
};

// One probability vector per player.
using MixedProfile = std::vector<RationalVector>;

// Throws std::invalid_argument when `keep` is not a subset of the players.
CorrelatedProfile Marginal(const CorrelatedProfile& profile, std::span<const int> keep);

// Independent product of the listed players' mixed strategies.
CorrelatedProfile ProductProfile(const MixedProfile& mixed, std::span<const int> players);

// All players except i, increasing.
std::vector<int> Opponents(const StrategicGame& game, int i);

// Expected payoff to i of s_i when the others play `opp`, which must be a
// distribution over exactly the opponents of i.
Rational ExpectedUtility(const StrategicGame& game, int i, int s_i, const CorrelatedProfile& opp);
Rational ExpectedUtility(const StrategicGame& game, int i, int s_i, const MixedProfile& mixed);

// Exact argmax set, increasing.
std::vector<int> BestResponses(const StrategicGame& game, int i, const CorrelatedProfile& opp);
std::vector<int> BestResponses(const StrategicGame& game, int i, const MixedProfile& mixed);

// Expected payoff of every strategy of i against the others' mixed play.
RationalVector PayoffVector(const StrategicGame& game, int i, const MixedProfile& mixed);
std::vector<double> PayoffVector(const StrategicGame& game, int i,
                                 const std::vector<std::vector<double>>& mixed);

bool IsWeaklyDominated(const StrategicGame& game, int i, int s_i);
bool IsStrictlyDominated(const StrategicGame& game, int i, int s_i);

struct StrategyRef {
  int player;
  int strategy;
  bool operator==(const StrategyRef&) const = default;
  auto operator<=>(const StrategyRef&) const = default;
};

// First strictly dominated strategy in (player, strategy) order.
std::optional<StrategyRef> ValidateNoStrictDominance(const StrategicGame& game);

bool IsNash(const StrategicGame& game, const MixedProfile& mixed);

// Subgame keeping kept[i] (increasing original indices) for each player.
StrategicGame RestrictGame(const StrategicGame& game, const std::vector<std::vector<int>>& kept);

struct ReducedGame {
  StrategicGame game;
  std::vector<std::vector<int>> kept;  // original strategy indices
  std::vector<int> original_counts;

  // Drops removed strategies from a profile of the original game. Throws
  // std::invalid_argument when a removed strategy has positive weight.
  MixedProfile Restrict(const MixedProfile& original) const;
  MixedProfile Expand(const MixedProfile& reduced) const;
};

// Iterated removal of strictly dominated strategies, one at a time in
// (player, strategy) order. No player is reduced below two strategies.
ReducedGame RemoveStrictlyDominated(const StrategicGame& game);

}  // namespace pce

#endif  // PCE_STRATEGIC_GAME_H_
