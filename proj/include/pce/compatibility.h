#ifndef PCE_COMPATIBILITY_H_
#define PCE_COMPATIBILITY_H_

#include <optional>
#include <string>
#include <vector>

#include "pce/signaling_game.h"
#include "pce/strategic_game.h"

namespace pce {

// Totally mixed counterexample to s_i* >= s_j*: s_j* is weakly optimal for
// j under sigma, sigma and sigma_tilde agree on the play of everyone but
// i and j, and `deviation` does at least as well as s_i* for i under
// sigma_tilde.
struct CompatibilityWitness {
  CorrelatedProfile sigma;
  CorrelatedProfile sigma_tilde;
  int deviation;
};

struct CompatibilityVerdict {
  bool holds = true;
  // No totally mixed sigma makes s_j* weakly optimal.
  bool vacuous = false;
  std::optional<CompatibilityWitness> witness;
};

struct CompatibilityOptions {
  // Refuse games with strictly dominated strategies.
  bool validate = true;
};

// Decides whether i is more compatible with s_i than j is with s_j. Throws
// PreconditionError when i == j or the game has a strictly dominated
// strategy.
CompatibilityVerdict IsMoreCompatible(const StrategicGame& game, int i, int s_i, int j, int s_j,
                                      const CompatibilityOptions& options = {});

// Re-checks a witness against the definition with exact expected utilities.
bool VerifyWitness(const StrategicGame& game, int i, int s_i, int j, int s_j,
                   const CompatibilityWitness& witness);

struct CompatibilityEdge {
  StrategyRef from;
  StrategyRef to;
  bool vacuous;
};

struct CompatibilityDigraph {
  std::vector<StrategyRef> nodes;
  std::vector<CompatibilityEdge> edges;

  bool HasEdge(StrategyRef from, StrategyRef to) const;
  int NodeIndex(StrategyRef node) const;
};

// Runs IsMoreCompatible on every ordered pair of strategies of different
// players. Throws PreconditionError on games with strictly dominated
// strategies.
CompatibilityDigraph BuildCompatibilityDigraph(const StrategicGame& game);

struct CriterionFailure {
  int signal;
  int action;
  std::string reason;
};

struct CriterionResult {
  bool passes = true;
  std::vector<CriterionFailure> failures;
};

// Compatibility criterion for a signaling equilibrium given in strategic
// form: one distribution over signals per type followed by the receiver's
// distribution over plans. Throws PreconditionError when the profile is not
// a Nash equilibrium of SignalingToStrategic(sg).
CriterionResult CheckCompatibilityCriterion(const SignalingGame& sg, const MixedProfile& eq);

// Receiver's behavioral probability of `action` after `signal`.
Rational BehavioralResponse(const SignalingGame& sg, const RationalVector& plan_mix, int signal,
                            int action);

}  // namespace pce

#endif  // PCE_COMPATIBILITY_H_
