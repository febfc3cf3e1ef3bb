#include "pce/learning.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pce/errors.h"
#include "pce/special_functions.h"

namespace pce {

LearningProblem::LearningProblem(const ExtensiveGame& game, int i) : game_(game), player_(i) {
  const FactorResult result = Factor(game_, i);
  if (!result.factoring) {
    std::string message = "game is not factorable for " + game_.player(i);
    if (!result.violations.empty()) message += ": " + result.violations.front().message;
    throw PreconditionError(message);
  }
  factoring_ = *result.factoring;
  relevant_ = factoring_.relevant;
  const auto& own = game_.player_infosets(i);
  for (int s = 0; s < game_.num_strategies(i); ++s) {
    ActionProfile base(game_.num_infosets(), 0);
    const auto actions = game_.StrategyActions(i, s);
    for (size_t k = 0; k < own.size(); ++k) base[own[k]] = actions[k];
    int outcomes = 1;
    for (int h : relevant_[s]) outcomes *= game_.num_actions(h);
    std::vector<double> values;
    for (int o = 0; o < outcomes; ++o) {
      ActionProfile a = base;
      const auto decoded = DecodeOutcome(s, o);
      for (size_t k = 0; k < decoded.size(); ++k) a[relevant_[s][k]] = decoded[k];
      values.push_back(game_.ExpectedPayoffs(a)[i].get_d());
    }
    payoffs_.push_back(std::move(values));
  }
  auxiliary_ = AdditiveSeparability(game_, i, factoring_);
}

std::vector<int> LearningProblem::DecodeOutcome(int s, int outcome) const {
  const auto& sets = relevant_.at(s);
  std::vector<int> actions(sets.size());
  for (int k = static_cast<int>(sets.size()) - 1; k >= 0; --k) {
    actions[k] = outcome % game_.num_actions(sets[k]);
    outcome /= game_.num_actions(sets[k]);
  }
  return actions;
}

int LearningProblem::EncodeOutcome(int s, const std::vector<int>& actions) const {
  const auto& sets = relevant_.at(s);
  int outcome = 0;
  for (size_t k = 0; k < sets.size(); ++k) outcome = outcome * game_.num_actions(sets[k]) + actions[k];
  return outcome;
}

BeliefState BeliefState::Uniform(const ExtensiveGame& game, int i, double count) {
  BeliefState belief;
  for (int h : OpponentInfoSets(game, i)) {
    belief.counts[h] = std::vector<double>(game.num_actions(h), count);
  }
  return belief;
}

void BeliefState::Validate(const ExtensiveGame& game, int i) const {
  for (int h : OpponentInfoSets(game, i)) {
    auto it = counts.find(h);
    if (it == counts.end()) throw std::invalid_argument("no prior for " + game.infoset(h).id);
    if (static_cast<int>(it->second.size()) != game.num_actions(h)) {
      throw std::invalid_argument("prior for " + game.infoset(h).id + " has the wrong length");
    }
    for (double c : it->second) {
      if (!(c > 0)) throw std::invalid_argument("prior counts must be positive");
    }
  }
}

int History::Count(int s) const {
  return static_cast<int>(std::count_if(entries_.begin(), entries_.end(),
                                        [s](const HistoryEntry& e) { return e.strategy == s; }));
}

std::vector<HistoryEntry> History::Subhistory(int s) const {
  std::vector<HistoryEntry> out;
  for (const auto& e : entries_) {
    if (e.strategy == s) out.push_back(e);
  }
  return out;
}

std::vector<int> History::Strategies() const {
  std::vector<int> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.strategy);
  return out;
}

ArmState ArmState::Empty(const LearningProblem& problem, int s) {
  ArmState arm;
  for (int h : problem.relevant(s)) arm.counts.emplace_back(problem.game().num_actions(h), 0);
  return arm;
}

ArmState ArmState::FromHistory(const LearningProblem& problem, int s, const History& y) {
  ArmState arm = Empty(problem, s);
  for (const auto& e : y.entries()) {
    if (e.strategy == s) arm.Observe(e.actions);
  }
  return arm;
}

void ArmState::Observe(const std::vector<int>& actions) {
  if (actions.size() != counts.size()) throw std::invalid_argument("observation size mismatch");
  ++plays;
  for (size_t k = 0; k < actions.size(); ++k) ++counts[k].at(actions[k]);
}

std::vector<std::vector<double>> PosteriorCounts(const LearningProblem& problem,
                                                 const BeliefState& prior, int s,
                                                 const ArmState& arm) {
  std::vector<std::vector<double>> posterior;
  const auto& sets = problem.relevant(s);
  for (size_t k = 0; k < sets.size(); ++k) {
    auto it = prior.counts.find(sets[k]);
    if (it == prior.counts.end()) {
      throw std::invalid_argument("no prior for " + problem.game().infoset(sets[k]).id);
    }
    std::vector<double> c = it->second;
    for (size_t a = 0; a < c.size(); ++a) c[a] += arm.counts[k][a];
    posterior.push_back(std::move(c));
  }
  return posterior;
}

double DefaultQuantile(int n) { return 1.0 - 1.0 / (n + 2.0); }

BayesUcbPolicy::BayesUcbPolicy(const LearningProblem& problem, BeliefState prior,
                               QuantileFunction q, std::uint64_t seed)
    : problem_(problem), prior_(std::move(prior)), q_(std::move(q)), seed_(seed) {
  if (!problem_.auxiliary()) {
    throw PreconditionError("game is not additively separable for " +
                            problem_.game().player(problem_.player()));
  }
  prior_.Validate(problem_.game(), problem_.player());
}

double BayesUcbPolicy::Index(int s, const ArmState& arm) const {
  const auto& aux = *problem_.auxiliary();
  const double q = q_(arm.plays);
  if (!(q > 0 && q < 1)) throw PreconditionError("quantile level must lie in (0, 1)");
  const auto posterior = PosteriorCounts(problem_, prior_, s, arm);
  double index = aux.constant.at(s).get_d();
  const auto& sets = problem_.relevant(s);
  for (size_t k = 0; k < sets.size(); ++k) {
    std::vector<int> key = {s, static_cast<int>(k), arm.plays};
    key.insert(key.end(), arm.counts[k].begin(), arm.counts[k].end());
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::vector<double> weights;
      for (const auto& w : aux.terms.at(s).at(sets[k])) weights.push_back(w.get_d());
      std::uint64_t seed = seed_;
      for (int v : key) seed = SplitMix64(seed ^ static_cast<std::uint64_t>(v));
      it = cache_.emplace(key, DirichletLinearQuantile(posterior[k], weights, q, seed)).first;
    }
    index += it->second;
  }
  return index;
}

double BayesUcbIndex(const LearningProblem& problem, const BeliefState& prior, int s,
                     const History& y, const QuantileFunction& q, std::uint64_t seed) {
  const BayesUcbPolicy policy(problem, prior, q, seed);
  return policy.Index(s, ArmState::FromHistory(problem, s, y));
}

// States reachable in fewer than `horizon` plays of one strategy, stored
// flat and ordered by depth. A state is the vector of observed action
// counts on the strategy's relevant sets.
struct GittinsLattice {
  std::vector<int> set_sizes;
  int width = 0;
  int outcomes = 1;
  std::vector<std::vector<int>> outcome_actions;
  std::vector<int> depth;   // per state
  std::vector<int> counts;  // state * width + offset
  std::vector<int> next;    // state * outcomes + o, -1 at the last depth
  int size() const { return static_cast<int>(depth.size()); }
};

namespace {

std::shared_ptr<const GittinsLattice> BuildLattice(const LearningProblem& problem, int s,
                                                   int horizon) {
  auto lattice = std::make_shared<GittinsLattice>();
  for (int h : problem.relevant(s)) {
    lattice->set_sizes.push_back(problem.game().num_actions(h));
    lattice->width += lattice->set_sizes.back();
  }
  lattice->outcomes = problem.num_outcomes(s);
  for (int o = 0; o < lattice->outcomes; ++o) {
    lattice->outcome_actions.push_back(problem.DecodeOutcome(s, o));
  }
  const int w = lattice->width;
  const int n_out = lattice->outcomes;
  lattice->depth.push_back(0);
  lattice->counts.assign(w, 0);
  int layer_begin = 0;
  for (int d = 0; d < horizon; ++d) {
    const int layer_end = lattice->size();
    std::map<std::vector<int>, int> ids;
    for (int x = layer_begin; x < layer_end; ++x) {
      for (int o = 0; o < n_out; ++o) {
        if (d + 1 == horizon) {
          lattice->next.push_back(-1);
          continue;
        }
        std::vector<int> child(lattice->counts.begin() + static_cast<long>(x) * w,
                               lattice->counts.begin() + static_cast<long>(x + 1) * w);
        int offset = 0;
        const auto& actions = lattice->outcome_actions[o];
        for (size_t k = 0; k < actions.size(); ++k) {
          ++child[offset + actions[k]];
          offset += lattice->set_sizes[k];
        }
        auto [it, inserted] = ids.emplace(child, lattice->size());
        if (inserted) {
          lattice->depth.push_back(d + 1);
          lattice->counts.insert(lattice->counts.end(), child.begin(), child.end());
        }
        lattice->next.push_back(it->second);
      }
    }
    layer_begin = layer_end;
  }
  return lattice;
}

GittinsResult SolveGittins(const LearningProblem& problem, int s, const GittinsLattice& lattice,
                           const std::vector<std::vector<double>>& posterior, double beta,
                           int horizon) {
  if (!(beta >= 0 && beta < 1)) throw std::invalid_argument("discount must lie in [0, 1)");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (posterior.size() != lattice.set_sizes.size()) {
    throw std::invalid_argument("posterior does not match the relevant sets");
  }
  const int n = lattice.size();
  const int n_out = lattice.outcomes;
  const int w = lattice.width;
  std::vector<double> payoff(n_out);
  double max_abs = 0;
  for (int o = 0; o < n_out; ++o) {
    payoff[o] = problem.Payoff(s, o);
    max_abs = std::max(max_abs, std::abs(payoff[o]));
  }
  GittinsResult result;
  result.truncation_bound = beta == 0 ? 0 : max_abs * std::pow(beta, horizon) / (1 - beta);

  std::vector<double> prior_flat;
  std::vector<double> totals;
  for (const auto& c : posterior) {
    double t = 0;
    for (double v : c) {
      prior_flat.push_back(v);
      t += v;
    }
    totals.push_back(t);
  }
  if (static_cast<int>(prior_flat.size()) != w) {
    throw std::invalid_argument("posterior does not match the action counts");
  }
  // Predictive outcome probabilities (already multiplied by beta) and
  // expected rewards per state.
  std::vector<double> prob(static_cast<size_t>(n) * n_out);
  std::vector<double> reward(n);
  std::vector<double> marginal(w);
  for (int x = 0; x < n; ++x) {
    const int* c = &lattice.counts[static_cast<size_t>(x) * w];
    int offset = 0;
    for (size_t k = 0; k < lattice.set_sizes.size(); ++k) {
      const double total = totals[k] + lattice.depth[x];
      for (int a = 0; a < lattice.set_sizes[k]; ++a) {
        marginal[offset + a] = (prior_flat[offset + a] + c[offset + a]) / total;
      }
      offset += lattice.set_sizes[k];
    }
    double r = 0;
    for (int o = 0; o < n_out; ++o) {
      double p = 1;
      offset = 0;
      const auto& actions = lattice.outcome_actions[o];
      for (size_t k = 0; k < actions.size(); ++k) {
        p *= marginal[offset + actions[k]];
        offset += lattice.set_sizes[k];
      }
      r += p * payoff[o];
      prob[static_cast<size_t>(x) * n_out + o] = beta * p;
    }
    reward[x] = r;
  }

  // Dinkelbach: m <- N/D of the stopping rule that is optimal at charge m.
  // States are stored by depth, so a reverse sweep sees children first.
  std::vector<double> value(n);
  std::vector<double> time(n);
  double m = reward[0];
  for (int iter = 0; iter < 200; ++iter) {
    for (int x = n - 1; x >= 0; --x) {
      double v = reward[x] - m;
      double t = 1;
      const int* next = &lattice.next[static_cast<size_t>(x) * n_out];
      const double* p = &prob[static_cast<size_t>(x) * n_out];
      for (int o = 0; o < n_out; ++o) {
        const int y = next[o];
        if (y >= 0 && value[y] > 0) {
          v += p[o] * value[y];
          t += p[o] * time[y];
        }
      }
      value[x] = v;
      time[x] = t;
    }
    const double ratio = m + value[0] / time[0];
    const bool done = ratio - m <= 1e-14 * std::max(1.0, std::abs(m));
    m = std::max(m, ratio);
    if (done) break;
  }
  result.index = m;
  return result;
}

}  // namespace

GittinsResult GittinsIndex(const LearningProblem& problem, int s,
                           const std::vector<std::vector<double>>& posterior, double beta,
                           int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  const auto lattice = BuildLattice(problem, s, horizon);
  return SolveGittins(problem, s, *lattice, posterior, beta, horizon);
}

GittinsPolicy::GittinsPolicy(const LearningProblem& problem, BeliefState prior, double beta,
                             int horizon)
    : problem_(problem), prior_(std::move(prior)), beta_(beta), horizon_(horizon) {
  if (!(beta >= 0 && beta < 1)) throw std::invalid_argument("discount must lie in [0, 1)");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  prior_.Validate(problem_.game(), problem_.player());
  for (int s = 0; s < problem_.num_strategies(); ++s) {
    lattices_.push_back(BuildLattice(problem_, s, horizon_));
    double max_abs = 0;
    for (int o = 0; o < problem_.num_outcomes(s); ++o) {
      max_abs = std::max(max_abs, std::abs(problem_.Payoff(s, o)));
    }
    if (beta_ > 0) {
      truncation_bound_ =
          std::max(truncation_bound_, max_abs * std::pow(beta_, horizon_) / (1 - beta_));
    }
  }
}

double GittinsPolicy::Index(int s, const ArmState& arm) const {
  std::vector<int> key = {s};
  for (const auto& c : arm.counts) key.insert(key.end(), c.begin(), c.end());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const auto posterior = PosteriorCounts(problem_, prior_, s, arm);
  const double index = SolveGittins(problem_, s, *lattices_[s], posterior, beta_, horizon_).index;
  cache_.emplace(std::move(key), index);
  return index;
}

std::vector<std::vector<double>> BehaviorDistributions(const ExtensiveGame& game,
                                                       const MixedProfile& sigma) {
  if (static_cast<int>(sigma.size()) != game.num_players()) {
    throw std::invalid_argument("profile has the wrong number of players");
  }
  for (int p = 0; p < game.num_players(); ++p) {
    if (static_cast<int>(sigma[p].size()) != game.num_strategies(p)) {
      throw std::invalid_argument("profile for " + game.player(p) + " has the wrong length");
    }
    Rational total = 0;
    for (const auto& x : sigma[p]) {
      if (x < 0) throw std::invalid_argument("negative probability for " + game.player(p));
      total += x;
    }
    if (total != 1) throw std::invalid_argument("profile for " + game.player(p) + " does not sum to 1");
  }
  std::vector<std::vector<double>> behavior(game.num_infosets());
  for (int h = 0; h < game.num_infosets(); ++h) {
    const int owner = game.infoset(h).player;
    if (owner < 0) continue;
    const auto& own = game.player_infosets(owner);
    const int pos = static_cast<int>(std::find(own.begin(), own.end(), h) - own.begin());
    std::vector<Rational> exact(game.num_actions(h), Rational(0));
    for (int s = 0; s < game.num_strategies(owner); ++s) {
      exact[game.StrategyActions(owner, s)[pos]] += sigma[owner][s];
    }
    for (const auto& x : exact) behavior[h].push_back(x.get_d());
  }
  return behavior;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ResponsePath::ResponsePath(std::shared_ptr<const std::vector<std::vector<double>>> behavior,
                           std::uint64_t seed)
    : behavior_(std::move(behavior)), seed_(seed) {}

ResponsePath::ResponsePath(const ExtensiveGame& game, const MixedProfile& sigma,
                           std::uint64_t seed)
    : ResponsePath(std::make_shared<const std::vector<std::vector<double>>>(
                       BehaviorDistributions(game, sigma)),
                   seed) {}

int ResponsePath::Action(int h, int t) const {
  const auto& dist = behavior_->at(h);
  if (dist.empty()) throw std::invalid_argument("information set has no owner");
  if (t < 1) throw std::invalid_argument("counts start at 1");
  const std::uint64_t bits =
      SplitMix64(SplitMix64(seed_ ^ SplitMix64(static_cast<std::uint64_t>(h))) +
                 static_cast<std::uint64_t>(t));
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  double cumulative = 0;
  int last = 0;
  for (int a = 0; a < static_cast<int>(dist.size()); ++a) {
    if (dist[a] <= 0) continue;
    cumulative += dist[a];
    last = a;
    if (u < cumulative) return a;
  }
  return last;
}

int ChooseStrategy(const IndexPolicy& policy, const std::vector<ArmState>& arms) {
  int best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < static_cast<int>(arms.size()); ++s) {
    const double index = policy.Index(s, arms[s]);
    if (index > best_index) {
      best = s;
      best_index = index;
    }
  }
  return best;
}

namespace {

std::vector<ArmState> EmptyArms(const LearningProblem& problem) {
  std::vector<ArmState> arms;
  for (int s = 0; s < problem.num_strategies(); ++s) arms.push_back(ArmState::Empty(problem, s));
  return arms;
}

std::vector<int> RunStrategies(const LearningProblem& problem, const IndexPolicy& policy,
                               const ResponsePath& path, int horizon) {
  auto arms = EmptyArms(problem);
  std::vector<int> played;
  played.reserve(horizon);
  std::vector<int> actions;
  for (int t = 0; t < horizon; ++t) {
    const int s = ChooseStrategy(policy, arms);
    const auto& sets = problem.relevant(s);
    actions.assign(sets.size(), 0);
    for (size_t k = 0; k < sets.size(); ++k) actions[k] = path.Action(sets[k], arms[s].plays + 1);
    arms[s].Observe(actions);
    played.push_back(s);
  }
  return played;
}

void CheckGamma(double gamma) {
  if (!(gamma >= 0 && gamma < 1)) throw std::invalid_argument("gamma must lie in [0, 1)");
}

std::vector<double> LifetimeWeights(double gamma, int horizon) {
  std::vector<double> w(horizon);
  double g = 1;
  for (int t = 0; t < horizon; ++t) {
    w[t] = (1 - gamma) * g;
    g *= gamma;
  }
  return w;
}

struct Moments {
  double sum = 0;
  double sum_sq = 0;
  void Add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  double Mean(int n) const { return sum / n; }
  double StandardError(int n) const {
    if (n < 2) return 0;
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  }
};

std::vector<int> Flatten(const std::vector<ArmState>& arms) {
  std::vector<int> key;
  for (const auto& arm : arms) {
    key.push_back(arm.plays);
    for (const auto& c : arm.counts) key.insert(key.end(), c.begin(), c.end());
  }
  return key;
}

}  // namespace

History RunPolicy(const LearningProblem& problem, const IndexPolicy& policy,
                  const ResponsePath& path, int horizon) {
  auto arms = EmptyArms(problem);
  History y;
  for (int t = 0; t < horizon; ++t) {
    const int s = ChooseStrategy(policy, arms);
    const auto& sets = problem.relevant(s);
    std::vector<int> actions(sets.size());
    for (size_t k = 0; k < sets.size(); ++k) actions[k] = path.Action(sets[k], arms[s].plays + 1);
    arms[s].Observe(actions);
    y.Append({s, std::move(actions)});
  }
  return y;
}

int HorizonFor(double gamma, double tol) {
  CheckGamma(gamma);
  if (gamma == 0) return 1;
  return std::max(1, static_cast<int>(std::ceil(std::log(tol) / std::log(gamma))));
}

InducedResponse ComputeInducedResponse(const LearningProblem& problem, const IndexPolicy& policy,
                                       const MixedProfile& sigma, double gamma,
                                       ResponseMethod method, int horizon, int paths,
                                       std::uint64_t seed) {
  CheckGamma(gamma);
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  const int n = problem.num_strategies();
  InducedResponse out;
  out.policy = policy.Name();
  out.gamma = gamma;
  out.method = method;
  out.horizon = horizon;
  out.truncation_bound = std::pow(gamma, horizon);
  out.probabilities.assign(n, 0);
  out.standard_errors.assign(n, 0);
  const auto behavior = std::make_shared<const std::vector<std::vector<double>>>(
      BehaviorDistributions(problem.game(), sigma));
  const auto weights = LifetimeWeights(gamma, horizon);

  if (method == ResponseMethod::kMonteCarlo) {
    if (paths < 1) throw std::invalid_argument("path budget must be at least 1");
    out.paths = paths;
    std::vector<Moments> moments(n);
    std::vector<double> freq(n);
    for (int p = 0; p < paths; ++p) {
      const ResponsePath path(behavior, SplitMix64(seed + static_cast<std::uint64_t>(p)));
      const auto played = RunStrategies(problem, policy, path, horizon);
      std::fill(freq.begin(), freq.end(), 0.0);
      for (int t = 0; t < horizon; ++t) freq[played[t]] += weights[t];
      for (int s = 0; s < n; ++s) moments[s].Add(freq[s]);
    }
    for (int s = 0; s < n; ++s) {
      out.probabilities[s] = moments[s].Mean(paths);
      out.standard_errors[s] = moments[s].StandardError(paths);
    }
    return out;
  }

  // Exact: the agent's state is its arm statistics; merge equal states.
  std::map<std::vector<int>, std::pair<std::vector<ArmState>, double>> layer;
  auto arms = EmptyArms(problem);
  layer.emplace(Flatten(arms), std::make_pair(arms, 1.0));
  for (int t = 0; t < horizon; ++t) {
    std::map<std::vector<int>, std::pair<std::vector<ArmState>, double>> next;
    for (const auto& [key, entry] : layer) {
      const auto& [state, mass] = entry;
      const int s = ChooseStrategy(policy, state);
      out.probabilities[s] += weights[t] * mass;
      if (t + 1 == horizon) continue;
      const auto& sets = problem.relevant(s);
      for (int o = 0; o < problem.num_outcomes(s); ++o) {
        const auto actions = problem.DecodeOutcome(s, o);
        double p = mass;
        for (size_t k = 0; k < sets.size(); ++k) p *= (*behavior)[sets[k]][actions[k]];
        if (p == 0) continue;
        auto child = state;
        child[s].Observe(actions);
        auto child_key = Flatten(child);
        auto it = next.find(child_key);
        if (it == next.end()) {
          next.emplace(std::move(child_key), std::make_pair(std::move(child), p));
        } else {
          it->second.second += p;
        }
      }
    }
    layer = std::move(next);
  }
  return out;
}

CoupledComparison CoupledCompare(const LearningProblem& problem_i, const IndexPolicy& policy_i,
                                 const LearningProblem& problem_j, const IndexPolicy& policy_j,
                                 int strategy_i, const MixedProfile& sigma, double gamma,
                                 int paths, int horizon, std::uint64_t seed) {
  CheckGamma(gamma);
  if (paths < 1) throw std::invalid_argument("path budget must be at least 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  const ExtensiveGame& game = problem_i.game();
  const auto phi = IsomorphicFactoring(game, problem_i.player(), problem_j.player(),
                                       problem_i.factoring(), problem_j.factoring());
  if (!phi) {
    throw PreconditionError("game is not isomorphically factorable for " +
                            game.player(problem_i.player()) + " and " +
                            game.player(problem_j.player()));
  }
  CoupledComparison out;
  out.strategy_i = strategy_i;
  out.strategy_j = phi->at(strategy_i);
  out.phi = *phi;
  out.paths = paths;
  out.horizon = horizon;
  out.gamma = gamma;
  out.truncation_bound = std::pow(gamma, horizon);
  const auto behavior = std::make_shared<const std::vector<std::vector<double>>>(
      BehaviorDistributions(game, sigma));
  const auto weights = LifetimeWeights(gamma, horizon);
  Moments mi;
  Moments mj;
  Moments md;
  for (int p = 0; p < paths; ++p) {
    const ResponsePath path(behavior, SplitMix64(seed + static_cast<std::uint64_t>(p)));
    const auto yi = RunStrategies(problem_i, policy_i, path, horizon);
    const auto yj = RunStrategies(problem_j, policy_j, path, horizon);
    double fi = 0;
    double fj = 0;
    int ci = 0;
    int cj = 0;
    bool dominated = true;
    for (int t = 0; t < horizon; ++t) {
      if (yi[t] == out.strategy_i) {
        fi += weights[t];
        ++ci;
      }
      if (yj[t] == out.strategy_j) {
        fj += weights[t];
        ++cj;
      }
      // The k-th play by j at period t needs i's k-th play by t.
      if (cj > ci) dominated = false;
    }
    if (dominated) {
      ++out.dominated_paths;
    } else if (out.first_violation < 0) {
      out.first_violation = p;
    }
    mi.Add(fi);
    mj.Add(fj);
    md.Add(fi - fj);
  }
  out.freq_i = mi.Mean(paths);
  out.freq_j = mj.Mean(paths);
  out.se_i = mi.StandardError(paths);
  out.se_j = mj.StandardError(paths);
  out.se_diff = md.StandardError(paths);
  return out;
}

}  // namespace pce
