#ifndef PCE_SIGNALING_GAME_H_
#define PCE_SIGNALING_GAME_H_

#include <string>
#include <vector>

#include "pce/rational.h"
#include "pce/strategic_game.h"

namespace pce {

// Sender of privately known type chooses a signal; receiver observes the
// signal and picks an action. Payoff tables are indexed [type][signal][action].
struct SignalingGame {
  std::vector<std::string> types;
  RationalVector prior;
  std::vector<std::string> signals;
  std::vector<std::string> actions;
  std::vector<std::vector<RationalVector>> sender_payoff;
  std::vector<std::vector<RationalVector>> receiver_payoff;
  std::string receiver_name = "receiver";

  int num_types() const { return static_cast<int>(types.size()); }
  int num_signals() const { return static_cast<int>(signals.size()); }
  int num_actions() const { return static_cast<int>(actions.size()); }

  // Throws std::invalid_argument on shape errors or a prior that is not
  // totally mixed.
  void Validate() const;
};

// Receiver plans map each signal to an action. Plans are numbered in
// lexicographic order with the first signal most significant.
int NumPlans(const SignalingGame& sg);
std::vector<int> DecodePlan(const SignalingGame& sg, int plan);
int EncodePlan(const SignalingGame& sg, const std::vector<int>& actions_by_signal);
std::string PlanLabel(const SignalingGame& sg, int plan);

// Players are the types (in order) followed by the receiver. Type players
// choose signals; the receiver chooses a plan. A type's payoff ignores the
// other types' choices; the receiver's payoff is prior-weighted.
StrategicGame SignalingToStrategic(const SignalingGame& sg);

}  // namespace pce

#endif  // PCE_SIGNALING_GAME_H_
