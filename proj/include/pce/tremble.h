#ifndef PCE_TREMBLE_H_
#define PCE_TREMBLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pce/compatibility.h"
#include "pce/rational.h"
#include "pce/strategic_game.h"

namespace pce {

// Lower bounds epsilon(s_i | i) on every strategy's probability.
struct TrembleProfile {
  std::vector<RationalVector> floors;

  Rational FloorSum(int i) const { return Sum(floors.at(i)); }
  TrembleProfile Scaled(const Rational& factor) const;
};

TrembleProfile UniformTrembles(const StrategicGame& game, const Rational& epsilon);

// Rank of every digraph node: longest path to a sink in the condensation,
// so that sinks get 0 and mutually reachable nodes share a rank.
std::vector<int> CompatibilityRanks(const CompatibilityDigraph& digraph);

// Floors base * ratio^rank. Throws PreconditionError when ratio < 1, base
// <= 0, or some player's floors sum to 1 or more.
TrembleProfile PlayerCompatibleTrembles(const StrategicGame& game,
                                        const CompatibilityDigraph& digraph,
                                        const Rational& base, const Rational& ratio);

bool IsPlayerCompatible(const TrembleProfile& tremble, const CompatibilityDigraph& digraph);

// Throws PreconditionError when the profile is not in the constrained
// polytope (a coordinate below its floor or a row not summing to one).
bool VerifyEpsilonEquilibrium(const StrategicGame& game, const MixedProfile& profile,
                              const TrembleProfile& tremble, const Rational& tol);

// Largest gap, over players, between the best payoff attainable inside the
// player's constrained polytope and the current payoff.
double ConstrainedResidual(const StrategicGame& game,
                           const std::vector<std::vector<double>>& profile,
                           const TrembleProfile& tremble);

struct EquilibriumOptions {
  int starts = 64;
  int max_iters = 2000;
  double step = 0.2;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  Rational verify_tol = Rational(1, 1000000000);
};

struct ConstrainedEquilibrium {
  MixedProfile profile;
  TrembleProfile tremble;
  double residual = 0;
};

struct EquilibriumSearch {
  std::vector<ConstrainedEquilibrium> points;  // distinct, canonically sorted
  int converged_starts = 0;
  int failed_starts = 0;
};

// Multi-start damped floor-respecting best response. Starts that do not
// converge are polished by Newton's method on the indifference conditions
// of a guessed support, then by a support scan on small games; starts that
// still fail are counted, not dropped silently.
EquilibriumSearch EpsilonEquilibria(const StrategicGame& game, const TrembleProfile& tremble,
                                    const EquilibriumOptions& options = {});

// Single start from a given point; nullopt when it does not converge.
std::optional<ConstrainedEquilibrium> EpsilonEquilibriumFrom(
    const StrategicGame& game, const TrembleProfile& tremble,
    const std::vector<std::vector<double>>& start, const EquilibriumOptions& options);

struct PceSchedule {
  Rational base = Rational(1, 16);
  Rational ratio = 2;
  Rational decay = Rational(1, 2);
  int steps = 20;
};

struct PceTraceRun {
  std::vector<MixedProfile> points;  // one per schedule step reached
  std::optional<MixedProfile> limit;
  bool limit_is_nash = false;
  std::string status;  // "converged" or a reason
};

struct PceTrace {
  std::vector<TrembleProfile> schedule;
  std::vector<PceTraceRun> runs;
  std::vector<MixedProfile> limits;  // distinct Nash limits, canonically sorted
  int inconclusive = 0;
};

PceTrace PceApproximate(const StrategicGame& game, const CompatibilityDigraph& digraph,
                        const PceSchedule& schedule, const EquilibriumOptions& options = {});

struct RefuteOptions {
  std::vector<Rational> eta_grid = {Rational(1, 10), Rational(1, 20), Rational(1, 100)};
  Rational floor_delta = Rational(1, 100000);
  int samples = 2000;
  int grid_resolution = 4;
  std::uint64_t seed = 7;
};

struct RefuteEntry {
  int player;
  int strategy;
  // Witness opponents' profile (player k's own row is left as sigma*_k).
  std::optional<MixedProfile> witness;
  std::optional<Rational> witness_eta;
  int candidates_checked = 0;
};

struct RefuteReport {
  bool refuted = false;
  std::vector<RefuteEntry> entries;
};

// Searches, for every player k and every strategy in the support of
// sigma*_k, for a totally mixed opponent profile near sigma* that respects
// the digraph ordering among k's opponents and keeps the strategy a best
// response. A pair without a witness at every eta refutes sigma*. Throws
// PreconditionError when sigma* is not a Nash equilibrium.
RefuteReport PceRefute(const StrategicGame& game, const CompatibilityDigraph& digraph,
                       const MixedProfile& sigma_star, const RefuteOptions& options = {});

// Digraph edge ordering check sigma_i(s_i*) >= sigma_j(s_j*) among players
// other than k (k = -1 checks every edge).
bool RespectsEdges(const CompatibilityDigraph& digraph, const MixedProfile& profile, int k);

std::vector<std::vector<double>> ToDouble(const MixedProfile& profile);

// Continued-fraction approximation within `tolerance`, falling back to the
// exact binary value.
Rational NearbyRational(double value, double tolerance = 1e-12);

}  // namespace pce

#endif  // PCE_TREMBLE_H_
