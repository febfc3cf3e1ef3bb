#include "pce/extensive_game.h"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "pce/errors.h"

namespace pce {

ExtensiveGame::ExtensiveGame(std::vector<std::string> players, std::vector<ExtensiveNode> nodes,
                             std::vector<InfoSet> infosets)
    : players_(std::move(players)), nodes_(std::move(nodes)), infosets_(std::move(infosets)) {
  const int n = num_players();
  const int count = static_cast<int>(nodes_.size());
  if (n == 0) throw std::invalid_argument("game needs players");
  if (count == 0) throw std::invalid_argument("game needs nodes");
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (players_[a] == players_[b]) throw std::invalid_argument("duplicate player " + players_[a]);
    }
  }
  parents_.assign(count, -1);
  for (int v = 0; v < count; ++v) {
    const auto& node = nodes_[v];
    for (int c : node.children) {
      if (c <= 0 || c >= count) {
        throw std::invalid_argument("node " + node.id + " has an invalid child index");
      }
      if (parents_[c] >= 0) throw std::invalid_argument("node " + nodes_[c].id + " has two parents");
      parents_[c] = v;
    }
    if (node.owner == kTerminal) {
      if (!node.children.empty()) throw std::invalid_argument("terminal " + node.id + " has children");
      if (static_cast<int>(node.payoffs.size()) != n) {
        throw std::invalid_argument("terminal " + node.id + " needs one payoff per player");
      }
    } else if (node.owner == kNature) {
      if (node.children.empty()) throw std::invalid_argument("chance node " + node.id + " has no children");
      if (node.chance.size() != node.children.size()) {
        throw std::invalid_argument("chance node " + node.id + " needs one probability per child");
      }
      Rational total = 0;
      for (const auto& p : node.chance) {
        if (p <= 0) throw std::invalid_argument("chance node " + node.id + " has a nonpositive probability");
        total += p;
      }
      if (total != 1) throw std::invalid_argument("chance node " + node.id + " probabilities do not sum to 1");
    } else {
      if (node.owner < 0 || node.owner >= n) throw std::invalid_argument("node " + node.id + " has a bad owner");
      if (node.infoset < 0 || node.infoset >= static_cast<int>(infosets_.size())) {
        throw std::invalid_argument("node " + node.id + " has no information set");
      }
      const auto& h = infosets_[node.infoset];
      if (h.player != node.owner) {
        throw std::invalid_argument("node " + node.id + " owner differs from information set " + h.id);
      }
      if (node.children.size() != h.actions.size()) {
        throw std::invalid_argument("node " + node.id + " child count differs from information set " + h.id);
      }
    }
  }
  if (parents_[0] != -1) throw std::invalid_argument("root has a parent");
  for (int v = 1; v < count; ++v) {
    if (parents_[v] < 0) throw std::invalid_argument("node " + nodes_[v].id + " is unreachable");
  }
  // Parent links from a single root with unique parents could still form a
  // cycle detached from the root; walk up from every node.
  for (int v = 0; v < count; ++v) {
    int steps = 0;
    for (int u = v; u != 0; u = parents_[u]) {
      if (++steps > count) throw std::invalid_argument("node graph has a cycle");
    }
  }

  player_infosets_.assign(n, {});
  for (int h = 0; h < static_cast<int>(infosets_.size()); ++h) {
    const auto& info = infosets_[h];
    if (info.player < 0 || info.player >= n) throw std::invalid_argument("information set " + info.id + " has a bad player");
    if (info.actions.empty()) throw std::invalid_argument("information set " + info.id + " has no actions");
    if (info.nodes.empty()) throw std::invalid_argument("information set " + info.id + " has no nodes");
    for (int v : info.nodes) {
      if (v < 0 || v >= count || nodes_[v].infoset != h || nodes_[v].owner != info.player) {
        throw std::invalid_argument("information set " + info.id + " lists a foreign node");
      }
    }
    for (int g = 0; g < h; ++g) {
      if (infosets_[g].id == info.id) throw std::invalid_argument("duplicate information set " + info.id);
    }
    player_infosets_[info.player].push_back(h);
  }
  for (int v = 0; v < count; ++v) {
    const auto& node = nodes_[v];
    if (node.owner < 0) continue;
    const auto& members = infosets_[node.infoset].nodes;
    if (std::find(members.begin(), members.end(), v) == members.end()) {
      throw std::invalid_argument("node " + node.id + " missing from its information set");
    }
  }

  // Perfect recall: every node of an information set shares the owner's
  // own history of (information set, action) pairs.
  auto own_history = [&](int v) {
    std::vector<std::pair<int, int>> history;
    const int owner = nodes_[v].owner;
    const auto path = PathTo(v);
    for (size_t k = 0; k + 1 < path.size(); ++k) {
      const auto& step = nodes_[path[k]];
      if (step.owner != owner) continue;
      const int action = static_cast<int>(
          std::find(step.children.begin(), step.children.end(), path[k + 1]) - step.children.begin());
      history.emplace_back(step.infoset, action);
    }
    return history;
  };
  for (const auto& info : infosets_) {
    const auto first = own_history(info.nodes[0]);
    for (int v : info.nodes) {
      if (own_history(v) != first) {
        throw std::invalid_argument("information set " + info.id + " violates perfect recall");
      }
    }
  }
}

int ExtensiveGame::PlayerIndex(const std::string& name) const {
  for (int i = 0; i < num_players(); ++i) {
    if (players_[i] == name) return i;
  }
  return -1;
}

int ExtensiveGame::InfoSetIndex(const std::string& id) const {
  for (int h = 0; h < num_infosets(); ++h) {
    if (infosets_[h].id == id) return h;
  }
  return -1;
}

int ExtensiveGame::num_strategies(int i) const {
  int total = 1;
  for (int h : player_infosets_.at(i)) total *= num_actions(h);
  return total;
}

std::vector<int> ExtensiveGame::StrategyActions(int i, int s) const {
  const auto& own = player_infosets_.at(i);
  if (s < 0 || s >= num_strategies(i)) throw std::out_of_range("strategy index out of range");
  std::vector<int> actions(own.size());
  for (int k = static_cast<int>(own.size()) - 1; k >= 0; --k) {
    actions[k] = s % num_actions(own[k]);
    s /= num_actions(own[k]);
  }
  return actions;
}

int ExtensiveGame::StrategyFromActions(int i, std::span<const int> actions) const {
  const auto& own = player_infosets_.at(i);
  if (actions.size() != own.size()) throw std::invalid_argument("wrong number of actions");
  int s = 0;
  for (size_t k = 0; k < own.size(); ++k) s = s * num_actions(own[k]) + actions[k];
  return s;
}

std::string ExtensiveGame::StrategyLabel(int i, int s) const {
  const auto& own = player_infosets_.at(i);
  const auto actions = StrategyActions(i, s);
  if (own.size() == 1) return infosets_[own[0]].actions[actions[0]];
  std::string label;
  for (size_t k = 0; k < own.size(); ++k) {
    if (k > 0) label += ",";
    label += infosets_[own[k]].id + ":" + infosets_[own[k]].actions[actions[k]];
  }
  return label;
}

int ExtensiveGame::StrategyIndex(int i, const std::string& label) const {
  for (int s = 0; s < num_strategies(i); ++s) {
    if (StrategyLabel(i, s) == label) return s;
  }
  return -1;
}

ActionProfile ExtensiveGame::ToActionProfile(std::span<const int> strategies) const {
  if (static_cast<int>(strategies.size()) != num_players()) throw std::invalid_argument("wrong profile size");
  ActionProfile actions(num_infosets(), 0);
  for (int i = 0; i < num_players(); ++i) {
    const auto own = StrategyActions(i, strategies[i]);
    for (size_t k = 0; k < own.size(); ++k) actions[player_infosets_[i][k]] = own[k];
  }
  return actions;
}

std::vector<int> ExtensiveGame::ToStrategies(const ActionProfile& actions) const {
  std::vector<int> strategies(num_players());
  for (int i = 0; i < num_players(); ++i) {
    std::vector<int> own;
    for (int h : player_infosets_[i]) own.push_back(actions.at(h));
    strategies[i] = StrategyFromActions(i, own);
  }
  return strategies;
}

std::vector<std::pair<int, Rational>> ExtensiveGame::Outcome(const ActionProfile& actions) const {
  if (static_cast<int>(actions.size()) != num_infosets()) throw std::invalid_argument("wrong action profile size");
  std::vector<std::pair<int, Rational>> out;
  std::function<void(int, const Rational&)> walk = [&](int v, const Rational& prob) {
    const auto& node = nodes_[v];
    if (node.owner == kTerminal) {
      out.emplace_back(v, prob);
    } else if (node.owner == kNature) {
      for (size_t c = 0; c < node.children.size(); ++c) walk(node.children[c], prob * node.chance[c]);
    } else {
      walk(node.children.at(actions[node.infoset]), prob);
    }
  };
  walk(0, Rational(1));
  return out;
}

RationalVector ExtensiveGame::ExpectedPayoffs(const ActionProfile& actions) const {
  RationalVector total(num_players(), Rational(0));
  for (const auto& [v, prob] : Outcome(actions)) {
    for (int i = 0; i < num_players(); ++i) total[i] += prob * nodes_[v].payoffs[i];
  }
  return total;
}

std::vector<bool> ExtensiveGame::ReachedInfoSets(const ActionProfile& actions) const {
  std::vector<bool> reached(num_infosets(), false);
  for (const auto& [terminal, prob] : Outcome(actions)) {
    for (int v : PathTo(terminal)) {
      if (nodes_[v].owner >= 0) reached[nodes_[v].infoset] = true;
    }
  }
  return reached;
}

std::vector<int> ExtensiveGame::PathTo(int v) const {
  std::vector<int> path;
  for (int u = v; u >= 0; u = parents_.at(u)) path.push_back(u);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<std::string> ExtensiveGame::MovesTwiceViolation() const {
  for (int v = 0; v < static_cast<int>(nodes_.size()); ++v) {
    if (nodes_[v].owner != kTerminal) continue;
    std::set<int> movers;
    for (int u : PathTo(v)) {
      const int owner = nodes_[u].owner;
      if (owner < 0) continue;
      if (!movers.insert(owner).second) {
        return "player " + players_[owner] + " moves twice on the path to " + nodes_[v].id;
      }
    }
  }
  return std::nullopt;
}

int NumActionProfiles(const ExtensiveGame& game) {
  int total = 1;
  for (int h = 0; h < game.num_infosets(); ++h) total *= game.num_actions(h);
  return total;
}

ActionProfile DecodeActionProfile(const ExtensiveGame& game, int index) {
  ActionProfile actions(game.num_infosets());
  for (int h = game.num_infosets() - 1; h >= 0; --h) {
    actions[h] = index % game.num_actions(h);
    index /= game.num_actions(h);
  }
  return actions;
}

StrategicGame ReduceToStrategic(const ExtensiveGame& game) {
  const int n = game.num_players();
  std::vector<std::vector<std::string>> strategies(n);
  std::vector<int> counts(n);
  for (int i = 0; i < n; ++i) {
    counts[i] = game.num_strategies(i);
    if (counts[i] < 2) {
      throw PreconditionError("player " + game.player(i) + " has a single pure strategy");
    }
    for (int s = 0; s < counts[i]; ++s) strategies[i].push_back(game.StrategyLabel(i, s));
  }
  int total = 1;
  for (int c : counts) total *= c;
  std::vector<RationalVector> payoffs;
  payoffs.reserve(total);
  std::vector<int> profile(n);
  for (int index = 0; index < total; ++index) {
    int rest = index;
    for (int i = n - 1; i >= 0; --i) {
      profile[i] = rest % counts[i];
      rest /= counts[i];
    }
    payoffs.push_back(game.ExpectedPayoffs(game.ToActionProfile(profile)));
  }
  return StrategicGame(game.players(), std::move(strategies), std::move(payoffs));
}

ExtensiveGame SimultaneousTree(const StrategicGame& game) {
  const int n = game.num_players();
  std::vector<ExtensiveNode> nodes;
  std::vector<InfoSet> infosets;
  for (int i = 0; i < n; ++i) infosets.push_back({game.player(i), i, game.strategies(i), {}});
  std::vector<int> chosen;
  std::function<int(int)> build = [&](int depth) {
    const int v = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[v].id = "n" + std::to_string(v);
    if (depth == n) {
      nodes[v].owner = kTerminal;
      nodes[v].payoffs = game.payoff_table()[game.ProfileIndex(chosen)];
      return v;
    }
    nodes[v].owner = depth;
    nodes[v].infoset = depth;
    infosets[depth].nodes.push_back(v);
    for (int s = 0; s < game.num_strategies(depth); ++s) {
      chosen.push_back(s);
      const int child = build(depth + 1);
      chosen.pop_back();
      nodes[v].children.push_back(child);
    }
    return v;
  };
  build(0);
  return ExtensiveGame(game.players(), std::move(nodes), std::move(infosets));
}

ExtensiveGame SignalingTree(const SignalingGame& sg) {
  sg.Validate();
  const int n_types = sg.num_types();
  const int receiver = n_types;
  std::vector<std::string> players = sg.types;
  players.push_back(sg.receiver_name);
  std::vector<ExtensiveNode> nodes;
  std::vector<InfoSet> infosets;
  for (int t = 0; t < n_types; ++t) infosets.push_back({sg.types[t], t, sg.signals, {}});
  for (int s = 0; s < sg.num_signals(); ++s) infosets.push_back({sg.signals[s], receiver, sg.actions, {}});
  auto add = [&](ExtensiveNode node) {
    node.id = "n" + std::to_string(nodes.size());
    nodes.push_back(std::move(node));
    return static_cast<int>(nodes.size()) - 1;
  };
  const int root = add({"", kNature, -1, {}, sg.prior, {}});
  for (int t = 0; t < n_types; ++t) {
    const int type_node = add({"", t, t, {}, {}, {}});
    infosets[t].nodes.push_back(type_node);
    nodes[root].children.push_back(type_node);
    for (int s = 0; s < sg.num_signals(); ++s) {
      const int h = n_types + s;
      const int r_node = add({"", receiver, h, {}, {}, {}});
      infosets[h].nodes.push_back(r_node);
      nodes[type_node].children.push_back(r_node);
      for (int a = 0; a < sg.num_actions(); ++a) {
        RationalVector payoffs(n_types + 1, Rational(0));
        payoffs[t] = sg.sender_payoff[t][s][a] / sg.prior[t];
        payoffs[receiver] = sg.receiver_payoff[t][s][a];
        const int leaf = add({"", kTerminal, -1, {}, {}, std::move(payoffs)});
        nodes[r_node].children.push_back(leaf);
      }
    }
  }
  return ExtensiveGame(std::move(players), std::move(nodes), std::move(infosets));
}

}  // namespace pce
