#ifndef PCE_EXTENSIVE_GAME_H_
#define PCE_EXTENSIVE_GAME_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pce/rational.h"
#include "pce/signaling_game.h"
#include "pce/strategic_game.h"

namespace pce {

inline constexpr int kNature = -1;
inline constexpr int kTerminal = -2;

struct ExtensiveNode {
  std::string id;
  int owner = kTerminal;      // player index, kNature or kTerminal
  int infoset = -1;           // decision nodes only
  std::vector<int> children;  // one per action
  RationalVector chance;      // Nature nodes only
  RationalVector payoffs;     // terminal nodes only, one per player
};

struct InfoSet {
  std::string id;
  int player;
  std::vector<std::string> actions;
  std::vector<int> nodes;
};

// Action chosen at every information set, indexed by information set.
using ActionProfile = std::vector<int>;

// Finite game tree rooted at node 0. Pure strategies of a player assign an
// action to each of her information sets; they are numbered in mixed radix
// over her information sets in increasing index order, first most
// significant.
class ExtensiveGame {
 public:
  // Throws std::invalid_argument on structural errors: bad child indices,
  // nodes with several parents or unreachable from the root, Nature
  // probabilities that are not positive or do not sum to one, information
  // sets mixing players or action counts, and imperfect recall.
  ExtensiveGame(std::vector<std::string> players, std::vector<ExtensiveNode> nodes,
                std::vector<InfoSet> infosets);

  int num_players() const { return static_cast<int>(players_.size()); }
  const std::vector<std::string>& players() const { return players_; }
  const std::string& player(int i) const { return players_.at(i); }
  int PlayerIndex(const std::string& name) const;

  const std::vector<ExtensiveNode>& nodes() const { return nodes_; }
  const ExtensiveNode& node(int v) const { return nodes_.at(v); }
  int parent(int v) const { return parents_.at(v); }
  const std::vector<InfoSet>& infosets() const { return infosets_; }
  const InfoSet& infoset(int h) const { return infosets_.at(h); }
  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  int num_actions(int h) const { return static_cast<int>(infosets_.at(h).actions.size()); }
  int InfoSetIndex(const std::string& id) const;
  const std::vector<int>& player_infosets(int i) const { return player_infosets_.at(i); }

  int num_strategies(int i) const;
  // Own action per information set, in player_infosets(i) order.
  std::vector<int> StrategyActions(int i, int s) const;
  int StrategyFromActions(int i, std::span<const int> actions) const;
  // Action label for single-information-set players, otherwise
  // "h:a,h:a" over information set ids.
  std::string StrategyLabel(int i, int s) const;
  int StrategyIndex(int i, const std::string& label) const;

  ActionProfile ToActionProfile(std::span<const int> strategies) const;
  std::vector<int> ToStrategies(const ActionProfile& actions) const;

  // Terminal nodes reached with positive probability, with probabilities.
  std::vector<std::pair<int, Rational>> Outcome(const ActionProfile& actions) const;
  RationalVector ExpectedPayoffs(const ActionProfile& actions) const;
  // Information sets containing a node reached with positive probability.
  std::vector<bool> ReachedInfoSets(const ActionProfile& actions) const;

  // Nodes on the path from the root to v, root first, v included.
  std::vector<int> PathTo(int v) const;

  // Description of the first path on which some player moves twice.
  std::optional<std::string> MovesTwiceViolation() const;

 private:
  std::vector<std::string> players_;
  std::vector<ExtensiveNode> nodes_;
  std::vector<InfoSet> infosets_;
  std::vector<int> parents_;
  std::vector<std::vector<int>> player_infosets_;
};

// Every action profile, in mixed radix over information sets (first most
// significant).
int NumActionProfiles(const ExtensiveGame& game);
ActionProfile DecodeActionProfile(const ExtensiveGame& game, int index);

// Nature is integrated out. Throws PreconditionError when a player has a
// single pure strategy.
StrategicGame ReduceToStrategic(const ExtensiveGame& game);

// One information set per player, each spanning all nodes at its depth;
// players move in order.
ExtensiveGame SimultaneousTree(const StrategicGame& game);

// Nature draws the type; each type is its own player with one information
// set; the receiver has one information set per signal. Terminal payoffs of
// the type player in her own branch are divided by her prior so that her
// expected payoff equals the signaling payoff.
ExtensiveGame SignalingTree(const SignalingGame& sg);

}  // namespace pce

#endif  // PCE_EXTENSIVE_GAME_H_
