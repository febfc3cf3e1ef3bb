#include "pce/factorability.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "pce/errors.h"
#include "pce/linear_system.h"

namespace pce {
namespace {

// Opponent profiles of i as a mixed-radix space over opponent information
// sets, with i's own actions fixed.
class OpponentSpace {
 public:
  OpponentSpace(const ExtensiveGame& game, int i, int s_i)
      : game_(game), infosets_(OpponentInfoSets(game, i)) {
    base_.assign(game.num_infosets(), 0);
    const auto own = game.StrategyActions(i, s_i);
    for (size_t k = 0; k < own.size(); ++k) base_[game.player_infosets(i)[k]] = own[k];
    size_ = 1;
    for (int h : infosets_) size_ *= game.num_actions(h);
  }

  int size() const { return size_; }
  const std::vector<int>& infosets() const { return infosets_; }

  ActionProfile At(int index) const {
    ActionProfile a = base_;
    for (int k = static_cast<int>(infosets_.size()) - 1; k >= 0; --k) {
      const int h = infosets_[k];
      a[h] = index % game_.num_actions(h);
      index /= game_.num_actions(h);
    }
    return a;
  }

  int IndexOf(const ActionProfile& a) const {
    int index = 0;
    for (int h : infosets_) index = index * game_.num_actions(h) + a[h];
    return index;
  }

 private:
  const ExtensiveGame& game_;
  std::vector<int> infosets_;
  ActionProfile base_;
  int size_;
};

RationalVector PayoffsOver(const ExtensiveGame& game, int i, const OpponentSpace& space) {
  RationalVector values;
  values.reserve(space.size());
  for (int k = 0; k < space.size(); ++k) values.push_back(game.ExpectedPayoffs(space.At(k))[i]);
  return values;
}

template <typename Key>
Partition Canonical(const std::vector<Key>& keys) {
  std::map<Key, int> ids;
  Partition p;
  for (const auto& key : keys) {
    auto [it, inserted] = ids.emplace(key, static_cast<int>(ids.size()));
    p.block.push_back(it->second);
  }
  p.num_blocks = static_cast<int>(ids.size());
  return p;
}

std::vector<int> Relevant(const ExtensiveGame& game, const OpponentSpace& space,
                          const RationalVector& values) {
  std::vector<int> out;
  for (int h : space.infosets()) {
    if (game.num_actions(h) < 2) continue;
    bool depends = false;
    for (int k = 0; k < space.size() && !depends; ++k) {
      ActionProfile a = space.At(k);
      const int original = a[h];
      for (int alt = 0; alt < game.num_actions(h) && !depends; ++alt) {
        if (alt == original) continue;
        a[h] = alt;
        if (values[space.IndexOf(a)] != values[k]) depends = true;
      }
    }
    if (depends) out.push_back(h);
  }
  return out;
}

std::string SetLabel(const ExtensiveGame& game, const std::vector<int>& infosets) {
  std::string s = "{";
  for (size_t k = 0; k < infosets.size(); ++k) {
    if (k > 0) s += ", ";
    s += game.infoset(infosets[k]).id;
  }
  return s + "}";
}

void RequireMovesOnce(const ExtensiveGame& game) {
  if (auto violation = game.MovesTwiceViolation()) throw PreconditionError(*violation);
}

}  // namespace

std::vector<int> OpponentInfoSets(const ExtensiveGame& game, int i) {
  std::vector<int> out;
  for (int h = 0; h < game.num_infosets(); ++h) {
    if (game.infoset(h).player != i) out.push_back(h);
  }
  return out;
}

std::vector<ActionProfile> OpponentProfiles(const ExtensiveGame& game, int i, int s_i) {
  OpponentSpace space(game, i, s_i);
  std::vector<ActionProfile> out;
  for (int k = 0; k < space.size(); ++k) out.push_back(space.At(k));
  return out;
}

Partition PayoffPartition(const ExtensiveGame& game, int i, int s_i) {
  OpponentSpace space(game, i, s_i);
  return Canonical(PayoffsOver(game, i, space));
}

Partition InfoSetJoin(const ExtensiveGame& game, int i, int s_i, const std::vector<int>& infosets) {
  OpponentSpace space(game, i, s_i);
  std::vector<std::vector<int>> keys;
  for (int k = 0; k < space.size(); ++k) {
    const auto a = space.At(k);
    std::vector<int> key;
    for (int h : infosets) key.push_back(a.at(h));
    keys.push_back(std::move(key));
  }
  return Canonical(keys);
}

std::vector<int> RelevantInfoSets(const ExtensiveGame& game, int i, int s_i) {
  OpponentSpace space(game, i, s_i);
  return Relevant(game, space, PayoffsOver(game, i, space));
}

std::vector<int> PayoffRelevantInfoSets(const ExtensiveGame& game, int i) {
  std::set<int> all;
  for (int s = 0; s < game.num_strategies(i); ++s) {
    for (int h : RelevantInfoSets(game, i, s)) all.insert(h);
  }
  return {all.begin(), all.end()};
}

FactorResult Factor(const ExtensiveGame& game, int i) {
  RequireMovesOnce(game);
  FactorResult result;
  Factoring factoring;
  for (int s = 0; s < game.num_strategies(i); ++s) {
    OpponentSpace space(game, i, s);
    const auto values = PayoffsOver(game, i, space);
    auto relevant = Relevant(game, space, values);
    const Partition payoff = Canonical(values);
    const Partition join = InfoSetJoin(game, i, s, relevant);
    if (!(payoff == join)) {
      FactorViolation v{FactorViolation::Kind::kNotGenerated, s, -1, relevant,
                        payoff.num_blocks, join.num_blocks, ""};
      v.message = "payoff of " + game.StrategyLabel(i, s) + " takes " +
                  std::to_string(payoff.num_blocks) + " values but play at " +
                  SetLabel(game, relevant) + " has " + std::to_string(join.num_blocks) +
                  " combinations; the dependence is not one-to-one (payoff ties between "
                  "different actions are not supported)";
      result.violations.push_back(std::move(v));
    }
    factoring.relevant.push_back(std::move(relevant));
  }
  for (int s = 0; s < game.num_strategies(i); ++s) {
    for (int t = s + 1; t < game.num_strategies(i); ++t) {
      std::vector<int> shared;
      std::set_intersection(factoring.relevant[s].begin(), factoring.relevant[s].end(),
                            factoring.relevant[t].begin(), factoring.relevant[t].end(),
                            std::back_inserter(shared));
      if (shared.empty()) continue;
      FactorViolation v{FactorViolation::Kind::kOverlap, s, t, shared, 0, 0, ""};
      v.message = SetLabel(game, shared) + " affects the payoff of both " +
                  game.StrategyLabel(i, s) + " and " + game.StrategyLabel(i, t) +
                  ", so the relevant sets cannot be disjoint";
      result.violations.push_back(std::move(v));
    }
  }
  if (result.violations.empty()) result.factoring = std::move(factoring);
  return result;
}

OneStepResult CheckOneStepProperty(const ExtensiveGame& game, int i) {
  const auto targets = PayoffRelevantInfoSets(game, i);
  const auto& own = game.player_infosets(i);
  const int total = NumActionProfiles(game);
  for (int index = 0; index < total; ++index) {
    ActionProfile a = DecodeActionProfile(game, index);
    const auto reached = game.ReachedInfoSets(a);
    for (int target : targets) {
      if (reached[target]) continue;
      bool reachable = false;
      for (int h : own) {
        const int original = a[h];
        for (int alt = 0; alt < game.num_actions(h) && !reachable; ++alt) {
          if (alt == original) continue;
          a[h] = alt;
          reachable = game.ReachedInfoSets(a)[target];
        }
        a[h] = original;
        if (reachable) break;
      }
      if (!reachable) return {false, target, game.ToStrategies(a)};
    }
  }
  return {};
}

std::optional<OnPathViolation> CheckRelevantSetsOnPath(const ExtensiveGame& game, int i,
                                                       const Factoring& factoring) {
  for (int s = 0; s < game.num_strategies(i); ++s) {
    OpponentSpace space(game, i, s);
    for (int k = 0; k < space.size(); ++k) {
      const auto a = space.At(k);
      const auto reached = game.ReachedInfoSets(a);
      for (int h : factoring.relevant.at(s)) {
        if (game.num_actions(h) >= 2 && !reached[h]) return OnPathViolation{s, h, a};
      }
    }
  }
  return std::nullopt;
}

std::optional<std::vector<int>> IsomorphicFactoring(const ExtensiveGame& game, int i, int j,
                                                    const Factoring& fi, const Factoring& fj) {
  if (i == j) throw PreconditionError("isomorphic factoring needs two different players");
  const int n = game.num_strategies(i);
  if (n != game.num_strategies(j)) return std::nullopt;
  auto third = [&](const std::vector<int>& sets) {
    std::vector<int> out;
    for (int h : sets) {
      const int owner = game.infoset(h).player;
      if (owner != i && owner != j) out.push_back(h);
    }
    return out;
  };
  std::vector<std::vector<int>> ti, tj;
  for (int s = 0; s < n; ++s) {
    ti.push_back(third(fi.relevant.at(s)));
    tj.push_back(third(fj.relevant.at(s)));
  }
  std::vector<int> phi(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> assign = [&](int s) {
    if (s == n) return true;
    for (int t = 0; t < n; ++t) {
      if (used[t] || ti[s] != tj[t]) continue;
      used[t] = true;
      phi[s] = t;
      if (assign(s + 1)) return true;
      used[t] = false;
    }
    return false;
  };
  if (!assign(0)) return std::nullopt;
  return phi;
}

Rational AuxiliaryPayoffs::Evaluate(int s_i, const ActionProfile& actions) const {
  Rational total = constant.at(s_i);
  for (const auto& [h, values] : terms.at(s_i)) total += values.at(actions.at(h));
  return total;
}

std::optional<AuxiliaryPayoffs> AdditiveSeparability(const ExtensiveGame& game, int i,
                                                     const Factoring& factoring) {
  AuxiliaryPayoffs aux;
  for (int s = 0; s < game.num_strategies(i); ++s) {
    const auto& sets = factoring.relevant.at(s);
    std::vector<int> offset;
    int columns = 1;
    for (int h : sets) {
      offset.push_back(columns);
      columns += game.num_actions(h);
    }
    OpponentSpace space(game, i, s);
    const auto values = PayoffsOver(game, i, space);
    // One row per distinct combination of play on the relevant sets.
    std::map<std::vector<int>, Rational> rows;
    for (int k = 0; k < space.size(); ++k) {
      const auto a = space.At(k);
      std::vector<int> key;
      for (int h : sets) key.push_back(a[h]);
      auto [it, inserted] = rows.emplace(key, values[k]);
      if (!inserted && it->second != values[k]) return std::nullopt;
    }
    RationalMatrix matrix;
    RationalVector rhs;
    for (const auto& [key, value] : rows) {
      RationalVector row(columns, Rational(0));
      row[0] = 1;
      for (size_t m = 0; m < sets.size(); ++m) row[offset[m] + key[m]] = 1;
      matrix.push_back(std::move(row));
      rhs.push_back(value);
    }
    const auto solved = SolveLinearSystemExact(matrix, rhs, columns);
    RationalVector x;
    if (const auto* unique = std::get_if<UniqueSolution>(&solved)) {
      x = unique->x;
    } else if (const auto* under = std::get_if<Underdetermined>(&solved)) {
      x = under->particular;
    } else {
      return std::nullopt;
    }
    aux.constant.push_back(x[0]);
    std::map<int, RationalVector> terms;
    for (size_t m = 0; m < sets.size(); ++m) {
      const int h = sets[m];
      terms[h] = RationalVector(x.begin() + offset[m], x.begin() + offset[m] + game.num_actions(h));
    }
    aux.terms.push_back(std::move(terms));
  }
  return aux;
}

BinaryParticipation IsBinaryParticipation(const ExtensiveGame& game, int i) {
  BinaryParticipation result;
  const auto& own = game.player_infosets(i);
  if (own.size() != 1 || game.num_actions(own[0]) != 2) {
    result.reason = "player does not have a unique information set with two actions";
    return result;
  }
  const int hi = own[0];
  // Terminal paths, with i's action where the path crosses h_i.
  struct PathInfo {
    int terminal;
    int own_action = -1;
    std::set<int> infosets;
    std::vector<std::pair<int, int>> steps;  // (node, child position)
  };
  std::vector<PathInfo> paths;
  for (int v = 0; v < static_cast<int>(game.nodes().size()); ++v) {
    if (game.node(v).owner != kTerminal) continue;
    PathInfo info{v};
    const auto path = game.PathTo(v);
    for (size_t k = 0; k + 1 < path.size(); ++k) {
      const auto& node = game.node(path[k]);
      const int pos = static_cast<int>(std::find(node.children.begin(), node.children.end(), path[k + 1]) -
                                       node.children.begin());
      info.steps.emplace_back(path[k], pos);
      if (node.owner < 0) continue;
      info.infosets.insert(node.infoset);
      if (node.infoset == hi) info.own_action = pos;
    }
    if (info.own_action < 0) {
      result.reason = "the path to " + game.node(v).id + " does not pass the player's information set";
      return result;
    }
    paths.push_back(std::move(info));
  }
  std::string failure;
  for (int out = 0; out < 2; ++out) {
    const int in = 1 - out;
    std::optional<Rational> out_payoff;
    bool constant = true;
    for (const auto& p : paths) {
      if (p.own_action != out) continue;
      const Rational& u = game.node(p.terminal).payoffs[i];
      if (out_payoff && *out_payoff != u) constant = false;
      out_payoff = u;
    }
    if (!constant) {
      if (failure.empty()) failure = "neither action gives a constant payoff";
      continue;
    }
    const std::set<int>* common = nullptr;
    bool same_sets = true;
    for (const auto& p : paths) {
      if (p.own_action != in) continue;
      if (common == nullptr) {
        common = &p.infosets;
      } else if (*common != p.infosets) {
        same_sets = false;
      }
    }
    if (!same_sets) {
      failure = "paths through " + game.infoset(hi).actions[in] + " cross different information sets";
      continue;
    }
    // Distinct In payoffs, up to play at sets the In payoff ignores.
    const auto depends = RelevantInfoSets(game, i, in);
    std::set<int> relevant(depends.begin(), depends.end());
    auto signature = [&](const PathInfo& p) {
      std::set<std::pair<int, int>> key;
      for (const auto& [node, pos] : p.steps) {
        const auto& n = game.node(node);
        if (n.owner == kNature) key.emplace(-1 - node, pos);
        if (n.owner >= 0 && relevant.count(n.infoset)) key.emplace(n.infoset, pos);
      }
      return key;
    };
    bool distinct = true;
    for (size_t a = 0; a < paths.size() && distinct; ++a) {
      if (paths[a].own_action != in) continue;
      for (size_t b = a + 1; b < paths.size() && distinct; ++b) {
        if (paths[b].own_action != in) continue;
        if (game.node(paths[a].terminal).payoffs[i] == game.node(paths[b].terminal).payoffs[i] &&
            signature(paths[a]) != signature(paths[b])) {
          distinct = false;
        }
      }
    }
    if (!distinct) {
      failure = "two outcomes after " + game.infoset(hi).actions[in] + " share a payoff";
      continue;
    }
    result.holds = true;
    result.in = in;
    result.out = out;
    result.reason.clear();
    return result;
  }
  result.reason = failure;
  return result;
}

}  // namespace pce
