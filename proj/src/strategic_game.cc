#include "pce/strategic_game.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pce/lp.h"

namespace pce {
namespace {

std::vector<int> Strides(const std::vector<int>& counts) {
  std::vector<int> strides(counts.size(), 1);
  for (int p = static_cast<int>(counts.size()) - 2; p >= 0; --p) {
    strides[p] = strides[p + 1] * counts[p + 1];
  }
  return strides;
}

int Product(const std::vector<int>& counts) {
  int total = 1;
  for (int c : counts) total *= c;
  return total;
}

}  // namespace

StrategicGame::StrategicGame(std::vector<std::string> players,
                             std::vector<std::vector<std::string>> strategies,
                             std::vector<RationalVector> payoffs)
    : players_(std::move(players)),
      strategies_(std::move(strategies)),
      payoffs_(std::move(payoffs)) {
  if (players_.empty()) throw std::invalid_argument("game has no players");
  if (strategies_.size() != players_.size()) {
    throw std::invalid_argument("one strategy list per player required");
  }
  if (std::set<std::string>(players_.begin(), players_.end()).size() != players_.size()) {
    throw std::invalid_argument("duplicate player name");
  }
  for (size_t i = 0; i < strategies_.size(); ++i) {
    if (strategies_[i].size() < 2) {
      throw std::invalid_argument("player '" + players_[i] + "' needs at least two strategies");
    }
    if (std::set<std::string>(strategies_[i].begin(), strategies_[i].end()).size() !=
        strategies_[i].size()) {
      throw std::invalid_argument("duplicate strategy label for player '" + players_[i] + "'");
    }
  }
  strides_ = Strides(strategy_counts());
  if (static_cast<int>(payoffs_.size()) != Product(strategy_counts())) {
    throw std::invalid_argument("payoff table is not total");
  }
  payoffs_double_.reserve(payoffs_.size());
  for (const auto& row : payoffs_) {
    if (row.size() != players_.size()) {
      throw std::invalid_argument("payoff vector length differs from player count");
    }
    std::vector<double> d;
    for (const auto& v : row) d.push_back(ToDouble(v));
    payoffs_double_.push_back(std::move(d));
  }
}

std::vector<int> StrategicGame::strategy_counts() const {
  std::vector<int> counts;
  for (const auto& s : strategies_) counts.push_back(static_cast<int>(s.size()));
  return counts;
}

int StrategicGame::ProfileIndex(std::span<const int> strategies) const {
  if (static_cast<int>(strategies.size()) != num_players()) {
    throw std::invalid_argument("profile length differs from player count");
  }
  int index = 0;
  for (int p = 0; p < num_players(); ++p) {
    if (strategies[p] < 0 || strategies[p] >= num_strategies(p)) {
      throw std::out_of_range("strategy index out of range");
    }
    index += strategies[p] * strides_[p];
  }
  return index;
}

std::vector<int> StrategicGame::ProfileStrategies(int profile) const {
  std::vector<int> s(num_players());
  for (int p = 0; p < num_players(); ++p) s[p] = StrategyAt(profile, p);
  return s;
}

int StrategicGame::PlayerIndex(const std::string& name) const {
  auto it = std::find(players_.begin(), players_.end(), name);
  return it == players_.end() ? -1 : static_cast<int>(it - players_.begin());
}

int StrategicGame::StrategyIndex(int i, const std::string& name) const {
  const auto& s = strategies_.at(i);
  auto it = std::find(s.begin(), s.end(), name);
  return it == s.end() ? -1 : static_cast<int>(it - s.begin());
}

StrategicGame StrategicGame::AffineTransformed(int i, const Rational& offset,
                                               const Rational& scale) const {
  auto payoffs = payoffs_;
  for (auto& row : payoffs) row.at(i) = offset + scale * row[i];
  return StrategicGame(players_, strategies_, std::move(payoffs));
}

CorrelatedProfile::CorrelatedProfile(std::vector<int> players, std::vector<int> counts,
                                     RationalVector weights)
    : players_(std::move(players)), counts_(std::move(counts)), weights_(std::move(weights)) {
  if (players_.size() != counts_.size()) throw std::invalid_argument("players/counts mismatch");
  if (!std::is_sorted(players_.begin(), players_.end()) ||
      std::adjacent_find(players_.begin(), players_.end()) != players_.end()) {
    throw std::invalid_argument("profile players must be strictly increasing");
  }
  if (static_cast<int>(weights_.size()) != Product(counts_)) {
    throw std::invalid_argument("weight vector has wrong length");
  }
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w < 0) throw std::invalid_argument("negative probability");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("probabilities sum to " + ToString(total));
}

CorrelatedProfile CorrelatedProfile::Uniform(std::vector<int> players, std::vector<int> counts) {
  const int n = Product(counts);
  return CorrelatedProfile(std::move(players), std::move(counts),
                           RationalVector(n, Rational(1) / n));
}

CorrelatedProfile CorrelatedProfile::PointMass(std::vector<int> players, std::vector<int> counts,
                                               std::span<const int> strategies) {
  RationalVector w(Product(counts), Rational(0));
  CorrelatedProfile shape(players, counts, RationalVector(w.size(), Rational(1) / w.size()));
  w[shape.Index(strategies)] = 1;
  return CorrelatedProfile(std::move(players), std::move(counts), std::move(w));
}

bool CorrelatedProfile::IsTotallyMixed() const {
  return std::all_of(weights_.begin(), weights_.end(), [](const Rational& w) { return w > 0; });
}

int CorrelatedProfile::Index(std::span<const int> strategies) const {
  if (strategies.size() != counts_.size()) throw std::invalid_argument("wrong profile length");
  int index = 0;
  for (size_t p = 0; p < counts_.size(); ++p) {
    if (strategies[p] < 0 || strategies[p] >= counts_[p]) {
      throw std::out_of_range("strategy index out of range");
    }
    index = index * counts_[p] + strategies[p];
  }
  return index;
}

std::vector<int> CorrelatedProfile::Strategies(int index) const {
  std::vector<int> s(counts_.size());
  for (int p = static_cast<int>(counts_.size()) - 1; p >= 0; --p) {
    s[p] = index % counts_[p];
    index /= counts_[p];
  }
  return s;
}

CorrelatedProfile Marginal(const CorrelatedProfile& profile, std::span<const int> keep) {
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  std::vector<int> positions;
  std::vector<int> counts;
  for (int player : kept) {
    auto it = std::find(profile.players().begin(), profile.players().end(), player);
    if (it == profile.players().end()) {
      throw std::invalid_argument("marginal player set is not a subset of the profile's players");
    }
    const int pos = static_cast<int>(it - profile.players().begin());
    positions.push_back(pos);
    counts.push_back(profile.counts()[pos]);
  }
  RationalVector weights(Product(counts), Rational(0));
  for (int index = 0; index < profile.size(); ++index) {
    const auto& w = profile.weights()[index];
    if (sgn(w) == 0) continue;
    const auto s = profile.Strategies(index);
    int target = 0;
    for (size_t k = 0; k < positions.size(); ++k) target = target * counts[k] + s[positions[k]];
    weights[target] += w;
  }
  return CorrelatedProfile(std::move(kept), std::move(counts), std::move(weights));
}

CorrelatedProfile ProductProfile(const MixedProfile& mixed, std::span<const int> players) {
  std::vector<int> ps(players.begin(), players.end());
  std::sort(ps.begin(), ps.end());
  std::vector<int> counts;
  for (int p : ps) counts.push_back(static_cast<int>(mixed.at(p).size()));
  RationalVector weights(Product(counts), Rational(1));
  for (size_t index = 0; index < weights.size(); ++index) {
    int rest = static_cast<int>(index);
    for (int k = static_cast<int>(ps.size()) - 1; k >= 0; --k) {
      weights[index] *= mixed[ps[k]][rest % counts[k]];
      rest /= counts[k];
    }
  }
  return CorrelatedProfile(std::move(ps), std::move(counts), std::move(weights));
}

std::vector<int> Opponents(const StrategicGame& game, int i) {
  std::vector<int> others;
  for (int p = 0; p < game.num_players(); ++p) {
    if (p != i) others.push_back(p);
  }
  return others;
}

namespace {

void CheckOpponentProfile(const StrategicGame& game, int i, const CorrelatedProfile& opp) {
  if (opp.players() != Opponents(game, i)) {
    throw std::invalid_argument("opponent profile must cover exactly the other players");
  }
  for (size_t k = 0; k < opp.players().size(); ++k) {
    if (opp.counts()[k] != game.num_strategies(opp.players()[k])) {
      throw std::invalid_argument("opponent profile strategy counts differ from the game");
    }
  }
}

void CheckMixed(const StrategicGame& game, const MixedProfile& mixed) {
  if (static_cast<int>(mixed.size()) != game.num_players()) {
    throw std::invalid_argument("mixed profile length differs from player count");
  }
  for (int p = 0; p < game.num_players(); ++p) {
    if (static_cast<int>(mixed[p].size()) != game.num_strategies(p)) {
      throw std::invalid_argument("mixed strategy length differs from strategy count");
    }
  }
}

std::vector<int> Argmax(const RationalVector& values) {
  Rational best = *std::max_element(values.begin(), values.end());
  std::vector<int> out;
  for (size_t k = 0; k < values.size(); ++k) {
    if (values[k] == best) out.push_back(static_cast<int>(k));
  }
  return out;
}

}  // namespace

Rational ExpectedUtility(const StrategicGame& game, int i, int s_i, const CorrelatedProfile& opp) {
  CheckOpponentProfile(game, i, opp);
  Rational value = 0;
  for (int index = 0; index < opp.size(); ++index) {
    const auto& w = opp.weights()[index];
    if (sgn(w) == 0) continue;
    const auto s = opp.Strategies(index);
    int profile = s_i * game.stride(i);
    for (size_t k = 0; k < s.size(); ++k) profile += s[k] * game.stride(opp.players()[k]);
    value += w * game.payoff(profile, i);
  }
  return value;
}

RationalVector PayoffVector(const StrategicGame& game, int i, const MixedProfile& mixed) {
  CheckMixed(game, mixed);
  RationalVector values(game.num_strategies(i), Rational(0));
  for (int profile = 0; profile < game.num_profiles(); ++profile) {
    Rational prob = 1;
    for (int p = 0; p < game.num_players() && sgn(prob) != 0; ++p) {
      if (p != i) prob *= mixed[p][game.StrategyAt(profile, p)];
    }
    if (sgn(prob) != 0) values[game.StrategyAt(profile, i)] += prob * game.payoff(profile, i);
  }
  return values;
}

std::vector<double> PayoffVector(const StrategicGame& game, int i,
                                 const std::vector<std::vector<double>>& mixed) {
  std::vector<double> values(game.num_strategies(i), 0.0);
  for (int profile = 0; profile < game.num_profiles(); ++profile) {
    double prob = 1;
    for (int p = 0; p < game.num_players(); ++p) {
      if (p != i) prob *= mixed[p][game.StrategyAt(profile, p)];
    }
    values[game.StrategyAt(profile, i)] += prob * game.payoff_double(profile, i);
  }
  return values;
}

Rational ExpectedUtility(const StrategicGame& game, int i, int s_i, const MixedProfile& mixed) {
  return PayoffVector(game, i, mixed).at(s_i);
}

std::vector<int> BestResponses(const StrategicGame& game, int i, const CorrelatedProfile& opp) {
  RationalVector values;
  for (int s = 0; s < game.num_strategies(i); ++s) values.push_back(ExpectedUtility(game, i, s, opp));
  return Argmax(values);
}

std::vector<int> BestResponses(const StrategicGame& game, int i, const MixedProfile& mixed) {
  return Argmax(PayoffVector(game, i, mixed));
}

namespace {

// Variables: mixture tau over S_i \ {s_i}, then either one slack per
// opponent profile (weak) or a single free margin t (strict).
Rational DominanceMargin(const StrategicGame& game, int i, int s_i, bool strict) {
  const int n_i = game.num_strategies(i);
  if (s_i < 0 || s_i >= n_i) throw std::out_of_range("strategy index out of range");
  std::vector<int> others;
  for (int k = 0; k < n_i; ++k) {
    if (k != s_i) others.push_back(k);
  }
  // Opponent profiles are the profiles with i's strategy fixed at 0.
  std::vector<int> opp_profiles;
  for (int profile = 0; profile < game.num_profiles(); ++profile) {
    if (game.StrategyAt(profile, i) == 0) opp_profiles.push_back(profile);
  }
  const int m = static_cast<int>(others.size());
  const int extra = strict ? 1 : static_cast<int>(opp_profiles.size());
  LinearProgram lp(m + extra);
  RationalVector objective(m + extra, Rational(0));
  for (int k = m; k < m + extra; ++k) objective[k] = 1;
  lp.SetObjective(objective);
  if (strict) lp.SetBounds(m, std::nullopt, std::nullopt);
  RationalVector simplex(m + extra, Rational(0));
  for (int k = 0; k < m; ++k) simplex[k] = 1;
  lp.AddConstraint(simplex, Relation::kEqual, Rational(1));
  for (size_t r = 0; r < opp_profiles.size(); ++r) {
    const int base = opp_profiles[r];
    RationalVector row(m + extra, Rational(0));
    for (int k = 0; k < m; ++k) row[k] = game.payoff(base + others[k] * game.stride(i), i);
    row[strict ? m : m + static_cast<int>(r)] = -1;
    // sum_k tau_k U(k, s_-i) - slack >= U(s_i, s_-i)
    lp.AddConstraint(row, strict ? Relation::kGreaterEqual : Relation::kEqual,
                     game.payoff(base + s_i * game.stride(i), i));
  }
  LpResult result = SolveExact(lp);
  if (auto* opt = std::get_if<LpOptimal>(&result)) return opt->value;
  if (std::holds_alternative<LpInfeasible>(result)) return Rational(-1);
  throw std::logic_error("dominance LP unbounded");
}

}  // namespace

bool IsWeaklyDominated(const StrategicGame& game, int i, int s_i) {
  return DominanceMargin(game, i, s_i, false) > 0;
}

bool IsStrictlyDominated(const StrategicGame& game, int i, int s_i) {
  return DominanceMargin(game, i, s_i, true) > 0;
}

std::optional<StrategyRef> ValidateNoStrictDominance(const StrategicGame& game) {
  for (int i = 0; i < game.num_players(); ++i) {
    for (int s = 0; s < game.num_strategies(i); ++s) {
      if (IsStrictlyDominated(game, i, s)) return StrategyRef{i, s};
    }
  }
  return std::nullopt;
}

bool IsNash(const StrategicGame& game, const MixedProfile& mixed) {
  CheckMixed(game, mixed);
  for (int i = 0; i < game.num_players(); ++i) {
    const RationalVector values = PayoffVector(game, i, mixed);
    const Rational best = *std::max_element(values.begin(), values.end());
    for (int s = 0; s < game.num_strategies(i); ++s) {
      if (sgn(mixed[i][s]) > 0 && values[s] != best) return false;
    }
  }
  return true;
}

StrategicGame RestrictGame(const StrategicGame& game, const std::vector<std::vector<int>>& kept) {
  const int n = game.num_players();
  if (static_cast<int>(kept.size()) != n) throw std::invalid_argument("kept has wrong size");
  std::vector<std::vector<std::string>> strategies(n);
  std::vector<int> counts(n);
  for (int i = 0; i < n; ++i) {
    for (int s : kept[i]) strategies[i].push_back(game.strategies(i).at(s));
    counts[i] = static_cast<int>(kept[i].size());
  }
  std::vector<RationalVector> payoffs;
  std::vector<int> local(n, 0), original(n);
  const int total = Product(counts);
  for (int idx = 0; idx < total; ++idx) {
    int rest = idx;
    for (int i = n - 1; i >= 0; --i) {
      local[i] = rest % counts[i];
      rest /= counts[i];
      original[i] = kept[i][local[i]];
    }
    payoffs.push_back(game.payoff_table()[game.ProfileIndex(original)]);
  }
  return StrategicGame(game.players(), std::move(strategies), std::move(payoffs));
}

MixedProfile ReducedGame::Restrict(const MixedProfile& original) const {
  MixedProfile out(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    Rational kept_mass = 0;
    for (int s : kept[i]) {
      out[i].push_back(original.at(i).at(s));
      kept_mass += original[i][s];
    }
    if (kept_mass != Sum(original[i])) {
      throw std::invalid_argument("profile plays a removed strategy");
    }
  }
  return out;
}

MixedProfile ReducedGame::Expand(const MixedProfile& reduced) const {
  MixedProfile out(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    out[i].assign(original_counts.at(i), Rational(0));
    for (size_t s = 0; s < kept[i].size(); ++s) out[i][kept[i][s]] = reduced.at(i).at(s);
  }
  return out;
}

ReducedGame RemoveStrictlyDominated(const StrategicGame& game) {
  std::vector<std::vector<int>> kept(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    for (int s = 0; s < game.num_strategies(i); ++s) kept[i].push_back(s);
  }
  StrategicGame current = game;
  while (true) {
    bool removed = false;
    for (int i = 0; i < current.num_players() && !removed; ++i) {
      if (current.num_strategies(i) <= 2) continue;
      for (int s = 0; s < current.num_strategies(i); ++s) {
        if (IsStrictlyDominated(current, i, s)) {
          kept[i].erase(kept[i].begin() + s);
          removed = true;
          break;
        }
      }
    }
    if (!removed) break;
    current = RestrictGame(game, kept);
  }
  return ReducedGame{std::move(current), std::move(kept), game.strategy_counts()};
}

}  // namespace pce
