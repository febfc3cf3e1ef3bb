#include "pce/standard_games.h"

#include <array>

namespace pce {

StrategicGame RestaurantGame(const Rational& x, const Rational& y) {
  // Strategy 0 is R for customers and H for the restaurant.
  std::vector<RationalVector> payoffs;
  const Rational half(1, 2);
  const Rational review(5, 2);
  for (int c = 0; c < 2; ++c) {
    for (int d = 0; d < 2; ++d) {
      for (int r = 0; r < 2; ++r) {
        const bool critic_in = c == 0;
        const bool diner_in = d == 0;
        const bool high = r == 0;
        const Rational food = high ? y : x;
        const Rational crowd = critic_in && diner_in ? half : Rational(0);
        Rational critic = critic_in ? Rational(food + 1 - crowd) : Rational(0);
        Rational diner = diner_in ? Rational(food - crowd) : Rational(0);
        const int customers = (critic_in ? 1 : 0) + (diner_in ? 1 : 0);
        Rational restaurant = high ? Rational(customers) : Rational(2 * customers);
        if (critic_in) restaurant += high ? review : Rational(-review);
        payoffs.push_back({critic, diner, restaurant});
      }
    }
  }
  return StrategicGame({"critic", "diner", "restaurant"},
                       {{"R", "Z"}, {"R", "Z"}, {"H", "L"}}, std::move(payoffs));
}

StrategicGame LinkGame(LinkVersion version) {
  // Order N1, N2, S1, S2; side 0 is North.
  const std::array<int, 4> cost = {14, 19, 14, 19};
  const std::array<int, 4> quality = version == LinkVersion::kAntiMonotonic
                                         ? std::array<int, 4>{30, 10, 30, 10}
                                         : std::array<int, 4>{10, 30, 10, 30};
  std::vector<RationalVector> payoffs;
  for (int profile = 0; profile < 16; ++profile) {
    std::array<bool, 4> active;
    for (int p = 0; p < 4; ++p) active[p] = ((profile >> (3 - p)) & 1) == 0;
    RationalVector u(4, Rational(0));
    for (int p = 0; p < 4; ++p) {
      if (!active[p]) continue;
      const int first = p < 2 ? 2 : 0;
      for (int q = first; q < first + 2; ++q) {
        if (active[q]) u[p] += quality[q] - cost[p];
      }
    }
    payoffs.push_back(std::move(u));
  }
  std::vector<std::string> s = {"Active", "Inactive"};
  return StrategicGame({"N1", "N2", "S1", "S2"}, {s, s, s, s}, std::move(payoffs));
}

SignalingGame BeerQuiche() {
  SignalingGame sg;
  sg.types = {"strong", "weak"};
  sg.prior = {Rational(9, 10), Rational(1, 10)};
  sg.signals = {"beer", "quiche"};
  sg.actions = {"duel", "not"};
  sg.sender_payoff.assign(2, std::vector<RationalVector>(2, RationalVector(2)));
  sg.receiver_payoff = sg.sender_payoff;
  for (int t = 0; t < 2; ++t) {
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) {
        const bool preferred = (t == 0 && s == 0) || (t == 1 && s == 1);
        sg.sender_payoff[t][s][a] = (preferred ? 1 : 0) + (a == 1 ? 2 : 0);
        const bool right = (t == 1 && a == 0) || (t == 0 && a == 1);
        sg.receiver_payoff[t][s][a] = right ? 1 : 0;
      }
    }
  }
  return sg;
}

ExtensiveGame RestaurantTree(const Rational& x, const Rational& y) {
  return SimultaneousTree(RestaurantGame(x, y));
}

ExtensiveGame LinkTree(LinkVersion version) { return SimultaneousTree(LinkGame(version)); }

MixedProfile RestaurantEnvironment() {
  const Rational half(1, 2);
  return {{half, half}, {half, half}, {Rational(2, 3), Rational(1, 3)}};
}

ExtensiveGame BeerQuicheTree() { return SignalingTree(BeerQuiche()); }

namespace {

ExtensiveNode Decision(const std::string& id, int owner, int infoset, std::vector<int> children) {
  return {id, owner, infoset, std::move(children), {}, {}};
}

ExtensiveNode Leaf(const std::string& id, std::vector<int> payoffs) {
  RationalVector u;
  for (int v : payoffs) u.emplace_back(v);
  return {id, kTerminal, -1, {}, {}, std::move(u)};
}

}  // namespace

ExtensiveGame CentipedeTree() {
  const std::vector<std::string> moves = {"drop", "pass"};
  std::vector<ExtensiveNode> nodes = {
      Decision("p1", 0, 0, {1, 2}),  Leaf("t1", {2, 0, 1}),
      Decision("p2", 1, 1, {3, 4}),  Leaf("t2", {1, 3, 0}),
      Decision("p3", 2, 2, {5, 6}),  Leaf("t3", {0, 1, 4}),
      Leaf("t4", {4, 2, 3}),
  };
  std::vector<InfoSet> infosets = {{"h1", 0, moves, {0}}, {"h2", 1, moves, {2}}, {"h3", 2, moves, {4}}};
  return ExtensiveGame({"P1", "P2", "P3"}, std::move(nodes), std::move(infosets));
}

ExtensiveGame SeltensHorseTree() {
  const std::vector<std::string> moves = {"Down", "Across"};
  std::vector<ExtensiveNode> nodes = {
      Decision("p1", 0, 0, {1, 4}),         // Down -> P3 (a), Across -> P2
      Decision("a", 2, 2, {2, 3}),          Leaf("t_down_left", {1, 4, 2}),
      Leaf("t_down_right", {5, 0, 6}),      Decision("p2", 1, 1, {5, 8}),
      Decision("c", 2, 2, {6, 7}),          Leaf("t_across_down_left", {2, 3, 0}),
      Leaf("t_across_down_right", {0, 6, 7}), Leaf("t_across_across", {3, 2, 1}),
  };
  std::vector<InfoSet> infosets = {{"h1", 0, moves, {0}},
                                   {"h2", 1, moves, {4}},
                                   {"h3", 2, {"Left", "Right"}, {1, 5}}};
  return ExtensiveGame({"P1", "P2", "P3"}, std::move(nodes), std::move(infosets));
}

}  // namespace pce
