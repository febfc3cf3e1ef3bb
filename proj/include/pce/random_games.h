#ifndef PCE_RANDOM_GAMES_H_
#define PCE_RANDOM_GAMES_H_

#include <random>
#include <string>
#include <vector>

#include "pce/rational.h"
#include "pce/strategic_game.h"

// Generators for randomized property checks. Payoffs are small integers
// (or fractions when max_den > 1) so that exact arithmetic stays cheap.
namespace pce {

inline Rational RandomRational(std::mt19937_64& rng, int range, int max_den = 1) {
  Rational r(std::uniform_int_distribution<int>(-range, range)(rng),
             std::uniform_int_distribution<int>(1, max_den)(rng));
  r.canonicalize();
  return r;
}

inline StrategicGame RandomGame(std::mt19937_64& rng, const std::vector<int>& counts,
                                int range = 5) {
  std::vector<std::string> players;
  std::vector<std::vector<std::string>> strategies;
  int profiles = 1;
  for (size_t p = 0; p < counts.size(); ++p) {
    players.push_back("p" + std::to_string(p));
    std::vector<std::string> s;
    for (int k = 0; k < counts[p]; ++k) s.push_back("s" + std::to_string(k));
    strategies.push_back(s);
    profiles *= counts[p];
  }
  std::vector<RationalVector> payoffs(profiles, RationalVector(counts.size()));
  for (auto& row : payoffs) {
    for (auto& v : row) v = RandomRational(rng, range);
  }
  return StrategicGame(players, strategies, payoffs);
}

// Random game with no strictly dominated strategy (rejection sampling).
inline StrategicGame RandomValidatedGame(std::mt19937_64& rng, const std::vector<int>& counts,
                                         int range = 5) {
  while (true) {
    StrategicGame g = RandomGame(rng, counts, range);
    if (!ValidateNoStrictDominance(g)) return g;
  }
}

inline RationalVector RandomDistribution(std::mt19937_64& rng, int n, bool interior = false) {
  RationalVector w(n);
  Rational total = 0;
  for (auto& v : w) {
    v = std::uniform_int_distribution<int>(interior ? 1 : 0, 6)(rng);
    total += v;
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  for (auto& v : w) v /= total;
  return w;
}

inline MixedProfile RandomMixed(std::mt19937_64& rng, const StrategicGame& g,
                                bool interior = false) {
  MixedProfile m;
  for (int p = 0; p < g.num_players(); ++p) {
    m.push_back(RandomDistribution(rng, g.num_strategies(p), interior));
  }
  return m;
}

}  // namespace pce

#endif  // PCE_RANDOM_GAMES_H_
