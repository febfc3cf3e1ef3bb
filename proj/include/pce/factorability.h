#ifndef PCE_FACTORABILITY_H_
#define PCE_FACTORABILITY_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pce/extensive_game.h"
#include "pce/rational.h"

namespace pce {

// Pure profiles of i's opponents, enumerated as action profiles over all
// information sets with i's own entries fixed by s_i.
std::vector<ActionProfile> OpponentProfiles(const ExtensiveGame& game, int i, int s_i);

// Information sets of players other than i, increasing.
std::vector<int> OpponentInfoSets(const ExtensiveGame& game, int i);

// Partition of the opponents' pure profiles, as canonical block labels in
// OpponentProfiles order (first occurrence numbering).
struct Partition {
  std::vector<int> block;
  int num_blocks = 0;
  bool operator==(const Partition&) const = default;
};

Partition PayoffPartition(const ExtensiveGame& game, int i, int s_i);
// Join of the partitions recording play at each listed information set.
Partition InfoSetJoin(const ExtensiveGame& game, int i, int s_i, const std::vector<int>& infosets);

// Opponent information sets with two or more actions at which changing the
// action alone changes U_i(s_i, .) for some opponent profile.
std::vector<int> RelevantInfoSets(const ExtensiveGame& game, int i, int s_i);

// Information sets of other players on which i's payoff is not independent.
std::vector<int> PayoffRelevantInfoSets(const ExtensiveGame& game, int i);

struct Factoring {
  std::vector<std::vector<int>> relevant;  // F_i[s_i], sorted information set indices
};

struct FactorViolation {
  enum class Kind { kNotGenerated, kOverlap };
  Kind kind;
  int strategy;
  int other_strategy = -1;     // kOverlap only
  std::vector<int> infosets;   // the candidate set, or the shared sets
  int payoff_blocks = 0;       // kNotGenerated only
  int join_blocks = 0;
  std::string message;
};

struct FactorResult {
  std::optional<Factoring> factoring;
  std::vector<FactorViolation> violations;  // empty iff factorable
};

// A valid F_i[s_i] must contain every information set on which
// U_i(s_i, .) depends and nothing else with two or more actions, so each
// candidate is forced; the check is then the join equality per strategy
// and pairwise disjointness. Throws PreconditionError when some player
// moves twice on a path.
FactorResult Factor(const ExtensiveGame& game, int i);

struct OneStepResult {
  bool passes = true;
  int infoset = -1;             // witness information set
  std::vector<int> strategies;  // witness pure profile
};

OneStepResult CheckOneStepProperty(const ExtensiveGame& game, int i);

struct OnPathViolation {
  int strategy;
  int infoset;
  ActionProfile profile;
};

// Every h in F_i[s_i] with two or more actions is reached whenever i plays s_i.
std::optional<OnPathViolation> CheckRelevantSetsOnPath(const ExtensiveGame& game, int i,
                                                       const Factoring& factoring);

// Bijection phi from i's strategies to j's, phi[s_i] = s_j, with
// F_i[s_i] and F_j[phi(s_i)] agreeing on third parties' information sets.
// The first bijection in lexicographic order is returned. Throws
// PreconditionError when i == j.
std::optional<std::vector<int>> IsomorphicFactoring(const ExtensiveGame& game, int i, int j,
                                                    const Factoring& fi, const Factoring& fj);

// U_i(s_i, a) = constant[s_i] + sum over h in F_i[s_i] of terms[s_i][h][a_h].
struct AuxiliaryPayoffs {
  RationalVector constant;
  std::vector<std::map<int, RationalVector>> terms;

  Rational Evaluate(int s_i, const ActionProfile& actions) const;
};

std::optional<AuxiliaryPayoffs> AdditiveSeparability(const ExtensiveGame& game, int i,
                                                     const Factoring& factoring);

struct BinaryParticipation {
  bool holds = false;
  int in = -1;   // strategy index of In
  int out = -1;  // strategy index of Out
  std::string reason;  // first failed condition when !holds
};

// The fifth condition (distinct In payoffs) is applied to profiles that
// differ at an information set on which i's In payoff depends.
BinaryParticipation IsBinaryParticipation(const ExtensiveGame& game, int i);

}  // namespace pce

#endif  // PCE_FACTORABILITY_H_
