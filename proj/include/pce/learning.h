#ifndef PCE_LEARNING_H_
#define PCE_LEARNING_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pce/extensive_game.h"
#include "pce/factorability.h"
#include "pce/strategic_game.h"

namespace pce {

// Player i's bandit problem in a game factorable for i. Strategies are the
// super arms; the opponent information sets in F_i[s] are the basic arms
// pulled by s. An outcome of s is an action profile on F_i[s], encoded in
// mixed radix over relevant(s) (first set most significant).
class LearningProblem {
 public:
  // Throws PreconditionError when the game is not factorable for i.
  LearningProblem(const ExtensiveGame& game, int i);

  const ExtensiveGame& game() const { return game_; }
  int player() const { return player_; }
  int num_strategies() const { return static_cast<int>(relevant_.size()); }
  const Factoring& factoring() const { return factoring_; }
  const std::vector<int>& relevant(int s) const { return relevant_.at(s); }
  int num_outcomes(int s) const { return static_cast<int>(payoffs_.at(s).size()); }
  std::vector<int> DecodeOutcome(int s, int outcome) const;
  int EncodeOutcome(int s, const std::vector<int>& actions) const;
  double Payoff(int s, int outcome) const { return payoffs_.at(s).at(outcome); }
  const std::optional<AuxiliaryPayoffs>& auxiliary() const { return auxiliary_; }

 private:
  ExtensiveGame game_;
  int player_;
  Factoring factoring_;
  std::vector<std::vector<int>> relevant_;
  std::vector<std::vector<double>> payoffs_;
  std::optional<AuxiliaryPayoffs> auxiliary_;
};

// Independent Dirichlet prior (or posterior) over play at each opponent
// information set.
struct BeliefState {
  std::map<int, std::vector<double>> counts;

  // Dirichlet(count, ..., count) at every opponent information set of i.
  static BeliefState Uniform(const ExtensiveGame& game, int i, double count = 1);
  // Throws std::invalid_argument on a missing set or a nonpositive count.
  void Validate(const ExtensiveGame& game, int i) const;
};

struct HistoryEntry {
  int strategy;
  std::vector<int> actions;  // aligned with LearningProblem::relevant(strategy)
};

class History {
 public:
  void Append(HistoryEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<HistoryEntry>& entries() const { return entries_; }
  int size() const { return static_cast<int>(entries_.size()); }
  // #(s | y)
  int Count(int s) const;
  std::vector<HistoryEntry> Subhistory(int s) const;
  std::vector<int> Strategies() const;

 private:
  std::vector<HistoryEntry> entries_;
};

// Sufficient statistic of a subhistory y_{i,s}: the number of plays and
// the action counts observed at each set in relevant(s).
struct ArmState {
  int plays = 0;
  std::vector<std::vector<int>> counts;

  static ArmState Empty(const LearningProblem& problem, int s);
  static ArmState FromHistory(const LearningProblem& problem, int s, const History& y);
  void Observe(const std::vector<int>& actions);
};

// Posterior Dirichlet counts on relevant(s): prior plus observed counts.
std::vector<std::vector<double>> PosteriorCounts(const LearningProblem& problem,
                                                 const BeliefState& prior, int s,
                                                 const ArmState& arm);

struct GittinsLattice;

class IndexPolicy {
 public:
  virtual ~IndexPolicy() = default;
  // The index of s computed from its own subhistory. Implementations may
  // memoize, so a policy object must not be shared across threads.
  virtual double Index(int s, const ArmState& arm) const = 0;
  virtual std::string Name() const = 0;
};

using QuantileFunction = std::function<double(int)>;

// 1 - 1/(n + 2): the schedule 1 - 1/(m + 1) read at m = n + 1, so the first
// play uses the median and no count maps to 0.
double DefaultQuantile(int n);

// Sum over h in F_i[s] of the q(#(s|y))-quantile of u_{i,h}(alpha_h) under
// the posterior, plus the strategy's constant term. Binary sets use
// BetaQuantile; larger sets use seeded Monte Carlo. Throws
// PreconditionError when the game is not additively separable for i or q
// leaves (0, 1).
double BayesUcbIndex(const LearningProblem& problem, const BeliefState& prior, int s,
                     const History& y, const QuantileFunction& q, std::uint64_t seed = 1);

class BayesUcbPolicy : public IndexPolicy {
 public:
  BayesUcbPolicy(const LearningProblem& problem, BeliefState prior,
                 QuantileFunction q = DefaultQuantile, std::uint64_t seed = 1);
  double Index(int s, const ArmState& arm) const override;
  std::string Name() const override { return "ucb"; }

 private:
  const LearningProblem& problem_;
  BeliefState prior_;
  QuantileFunction q_;
  std::uint64_t seed_;
  mutable std::map<std::vector<int>, double> cache_;
};

struct GittinsResult {
  double index = 0;
  double truncation_bound = 0;  // max|u| * beta^T / (1 - beta)
};

// Truncated Gittins index of s: the largest ratio of expected discounted
// payoff to expected discounted time over stopping times 1 <= tau <= T,
// with beliefs updated by Bayes' rule on the joint outcome of F_i[s].
// Solved by Dinkelbach iteration on the calibrated stopping problem.
// Requires 0 <= beta < 1 and T >= 1 (std::invalid_argument otherwise).
GittinsResult GittinsIndex(const LearningProblem& problem, int s,
                           const std::vector<std::vector<double>>& posterior, double beta,
                           int horizon = 25);

class GittinsPolicy : public IndexPolicy {
 public:
  GittinsPolicy(const LearningProblem& problem, BeliefState prior, double beta, int horizon = 25);
  double Index(int s, const ArmState& arm) const override;
  std::string Name() const override { return "opt"; }
  double truncation_bound() const { return truncation_bound_; }

 private:
  const LearningProblem& problem_;
  BeliefState prior_;
  double beta_;
  int horizon_;
  double truncation_bound_ = 0;
  std::vector<std::shared_ptr<const GittinsLattice>> lattices_;
  mutable std::map<std::vector<int>, double> cache_;
};

// Behaviour probabilities of sigma at every information set (empty for
// sets no player owns).
std::vector<std::vector<double>> BehaviorDistributions(const ExtensiveGame& game,
                                                       const MixedProfile& sigma);

// Response path: a_{t,h} for every information set h and count t >= 1,
// generated on demand from a counter hash of (seed, h, t). Entries are
// independent with the behaviour distribution of sigma at h.
class ResponsePath {
 public:
  ResponsePath(std::shared_ptr<const std::vector<std::vector<double>>> behavior,
               std::uint64_t seed);
  ResponsePath(const ExtensiveGame& game, const MixedProfile& sigma, std::uint64_t seed);
  int Action(int h, int t) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::shared_ptr<const std::vector<std::vector<double>>> behavior_;
  std::uint64_t seed_;
};

std::uint64_t SplitMix64(std::uint64_t x);

// Argmax of the indices; ties go to the lowest strategy index.
int ChooseStrategy(const IndexPolicy& policy, const std::vector<ArmState>& arms);

// The k-th play of s observes a_{k,h} at every h in F_i[s].
History RunPolicy(const LearningProblem& problem, const IndexPolicy& policy,
                  const ResponsePath& path, int horizon);

enum class ResponseMethod { kExactHorizon, kMonteCarlo };

struct InducedResponse {
  std::vector<double> probabilities;
  std::vector<double> standard_errors;  // zeros for the exact method
  std::string policy;
  double gamma = 0;
  ResponseMethod method = ResponseMethod::kMonteCarlo;
  int horizon = 0;
  int paths = 0;
  double truncation_bound = 0;  // gamma^horizon: unassigned lifetime mass
};

// Smallest T with gamma^T <= tol (1 when gamma = 0).
int HorizonFor(double gamma, double tol = 1e-12);

// Exact: expands the policy's decision tree to depth `horizon` with exact
// outcome probabilities under sigma. Monte Carlo: averages the lifetime
// weighted play of `paths` response paths. Throws std::invalid_argument on
// gamma outside [0, 1), horizon < 1, or paths < 1 for Monte Carlo.
InducedResponse ComputeInducedResponse(const LearningProblem& problem, const IndexPolicy& policy,
                                       const MixedProfile& sigma, double gamma,
                                       ResponseMethod method, int horizon, int paths = 0,
                                       std::uint64_t seed = 1);

struct CoupledComparison {
  int strategy_i = -1;
  int strategy_j = -1;
  std::vector<int> phi;
  double freq_i = 0;
  double freq_j = 0;
  double se_i = 0;
  double se_j = 0;
  double se_diff = 0;  // paired standard error of freq_i - freq_j
  int paths = 0;
  int dominated_paths = 0;  // paths where every k-th play by i comes no later
  int first_violation = -1;  // path index, -1 when none
  int horizon = 0;
  double gamma = 0;
  double truncation_bound = 0;
};

// Runs both agents on shared response paths. s_j* = phi(s_i*), where phi is
// the isomorphic factoring between i and j. Throws PreconditionError when
// none exists and std::invalid_argument on bad counts.
CoupledComparison CoupledCompare(const LearningProblem& problem_i, const IndexPolicy& policy_i,
                                 const LearningProblem& problem_j, const IndexPolicy& policy_j,
                                 int strategy_i, const MixedProfile& sigma, double gamma,
                                 int paths, int horizon, std::uint64_t seed = 1);

}  // namespace pce

#endif  // PCE_LEARNING_H_
