#include "pce/tremble.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "pce/errors.h"

namespace pce {
namespace {

using DoubleProfile = std::vector<std::vector<double>>;

std::vector<std::vector<double>> FloorsDouble(const TrembleProfile& tremble) {
  std::vector<std::vector<double>> out;
  for (const auto& row : tremble.floors) {
    std::vector<double> d;
    for (const auto& f : row) d.push_back(ToDouble(f));
    out.push_back(std::move(d));
  }
  return out;
}

void CheckShape(const StrategicGame& game, const TrembleProfile& tremble) {
  if (static_cast<int>(tremble.floors.size()) != game.num_players()) {
    throw PreconditionError("tremble profile has the wrong number of players");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (static_cast<int>(tremble.floors[i].size()) != game.num_strategies(i)) {
      throw PreconditionError("tremble profile has the wrong number of strategies for " +
                              game.player(i));
    }
    for (const auto& f : tremble.floors[i]) {
      if (f <= 0) throw PreconditionError("tremble floors must be positive");
    }
    if (tremble.FloorSum(i) >= 1) {
      throw PreconditionError("tremble floors for " + game.player(i) + " sum to 1 or more");
    }
  }
}

double Tie(double best) { return 1e-12 * std::max(1.0, std::abs(best)); }

// Floor plus the surplus split equally over the argmax set.
std::vector<double> Target(const std::vector<double>& values, const std::vector<double>& floors) {
  const double best = *std::max_element(values.begin(), values.end());
  std::vector<int> argmax;
  for (int s = 0; s < static_cast<int>(values.size()); ++s) {
    if (values[s] >= best - Tie(best)) argmax.push_back(s);
  }
  const double surplus = 1.0 - std::accumulate(floors.begin(), floors.end(), 0.0);
  std::vector<double> target = floors;
  for (int s : argmax) target[s] += surplus / argmax.size();
  return target;
}

double Distance(const DoubleProfile& a, const DoubleProfile& b) {
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t s = 0; s < a[i].size(); ++s) d = std::max(d, std::abs(a[i][s] - b[i][s]));
  }
  return d;
}

// dU_i(a) / d sigma_k(b) for k != i, stored as grads[i][a][k][b].
using Gradient = std::vector<std::vector<std::vector<std::vector<double>>>>;

Gradient CrossPayoffs(const StrategicGame& game, const DoubleProfile& mixed) {
  const int n = game.num_players();
  Gradient grads(n);
  for (int i = 0; i < n; ++i) {
    grads[i].assign(game.num_strategies(i), {});
    for (auto& by_k : grads[i]) {
      by_k.resize(n);
      for (int k = 0; k < n; ++k) by_k[k].assign(game.num_strategies(k), 0.0);
    }
  }
  std::vector<int> s(n);
  for (int profile = 0; profile < game.num_profiles(); ++profile) {
    for (int p = 0; p < n; ++p) s[p] = game.StrategyAt(profile, p);
    for (int i = 0; i < n; ++i) {
      const double u = game.payoff_double(profile, i);
      if (u == 0) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        double prob = 1;
        for (int p = 0; p < n; ++p) {
          if (p != i && p != k) prob *= mixed[p][s[p]];
        }
        grads[i][s[i]][k][s[k]] += prob * u;
      }
    }
  }
  return grads;
}

// Newton's method on the indifference system of a fixed support: active
// strategies share a payoff, inactive ones sit at their floors.
std::optional<DoubleProfile> SolveSupport(const StrategicGame& game,
                                          const std::vector<std::vector<double>>& floors,
                                          const std::vector<std::vector<int>>& active,
                                          DoubleProfile x) {
  const int n = game.num_players();
  std::vector<std::pair<int, int>> vars;
  for (int i = 0; i < n; ++i) {
    for (int a : active[i]) vars.emplace_back(i, a);
  }
  const int m = static_cast<int>(vars.size());
  std::vector<std::vector<int>> column(n);
  for (int i = 0; i < n; ++i) column[i].assign(game.num_strategies(i), -1);
  for (int v = 0; v < m; ++v) column[vars[v].first][vars[v].second] = v;

  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < game.num_strategies(i); ++s) {
      if (column[i][s] < 0) x[i][s] = floors[i][s];
    }
  }
  auto residual = [&](const DoubleProfile& point, Eigen::VectorXd& f) {
    f.resize(m);
    int row = 0;
    for (int i = 0; i < n; ++i) {
      f[row++] = std::accumulate(point[i].begin(), point[i].end(), 0.0) - 1.0;
      const auto values = PayoffVector(game, i, point);
      for (size_t t = 1; t < active[i].size(); ++t) {
        f[row++] = values[active[i][t]] - values[active[i][0]];
      }
    }
  };
  Eigen::VectorXd f;
  for (int iter = 0; iter < 60; ++iter) {
    residual(x, f);
    if (f.lpNorm<Eigen::Infinity>() < 1e-13) break;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
    const Gradient grads = CrossPayoffs(game, x);
    int row = 0;
    for (int i = 0; i < n; ++i) {
      for (int a : active[i]) jac(row, column[i][a]) = 1.0;
      ++row;
      for (size_t t = 1; t < active[i].size(); ++t) {
        for (int v = 0; v < m; ++v) {
          const auto [k, b] = vars[v];
          if (k == i) continue;
          jac(row, v) = grads[i][active[i][t]][k][b] - grads[i][active[i][0]][k][b];
        }
        ++row;
      }
    }
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-f);
    if (!step.allFinite()) return std::nullopt;
    for (int v = 0; v < m; ++v) x[vars[v].first][vars[v].second] += step[v];
  }
  residual(x, f);
  if (!(f.lpNorm<Eigen::Infinity>() < 1e-11)) return std::nullopt;
  for (int i = 0; i < n; ++i) {
    for (int a : active[i]) {
      if (x[i][a] < floors[i][a] - 1e-12) return std::nullopt;
      x[i][a] = std::max(x[i][a], floors[i][a]);
    }
  }
  return x;
}

std::vector<std::vector<int>> ActiveSets(const DoubleProfile& point,
                                         const std::vector<std::vector<double>>& floors,
                                         double threshold) {
  std::vector<std::vector<int>> active(point.size());
  for (size_t i = 0; i < point.size(); ++i) {
    int best = 0;
    for (size_t s = 0; s < point[i].size(); ++s) {
      if (point[i][s] - floors[i][s] > threshold) active[i].push_back(static_cast<int>(s));
      if (point[i][s] - floors[i][s] > point[i][best] - floors[i][best]) best = static_cast<int>(s);
    }
    if (active[i].empty()) active[i].push_back(best);
  }
  return active;
}

std::optional<ConstrainedEquilibrium> Finalize(const StrategicGame& game,
                                               const TrembleProfile& tremble,
                                               const DoubleProfile& point,
                                               const EquilibriumOptions& options) {
  MixedProfile profile(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    const auto& floors = tremble.floors[i];
    int largest = 0;
    for (int s = 0; s < game.num_strategies(i); ++s) {
      const double value = point[i][s];
      const double floor = ToDouble(floors[s]);
      profile[i].push_back(std::abs(value - floor) <= 1e-9 ? floors[s] : NearbyRational(value));
      if (value > point[i][largest]) largest = s;
    }
    Rational rest = 1;
    for (int s = 0; s < game.num_strategies(i); ++s) {
      if (s != largest) rest -= profile[i][s];
    }
    profile[i][largest] = rest;
    for (int s = 0; s < game.num_strategies(i); ++s) {
      if (profile[i][s] < floors[s]) return std::nullopt;
    }
  }
  if (!VerifyEpsilonEquilibrium(game, profile, tremble, options.verify_tol)) return std::nullopt;
  return ConstrainedEquilibrium{profile, tremble, ConstrainedResidual(game, ToDouble(profile), tremble)};
}

struct DampedResult {
  DoubleProfile point;
  DoubleProfile average;
  bool converged;
};

DampedResult DampedBestResponse(const StrategicGame& game,
                                const std::vector<std::vector<double>>& floors,
                                const TrembleProfile& tremble, DoubleProfile x,
                                const EquilibriumOptions& options) {
  const int n = game.num_players();
  DoubleProfile average = x;
  for (auto& row : average) std::fill(row.begin(), row.end(), 0.0);
  int averaged = 0;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    if (ConstrainedResidual(game, x, tremble) < options.tol) return {x, x, true};
    DoubleProfile next = x;
    for (int i = 0; i < n; ++i) {
      const auto target = Target(PayoffVector(game, i, x), floors[i]);
      for (int s = 0; s < game.num_strategies(i); ++s) {
        next[i][s] = (1 - options.step) * x[i][s] + options.step * target[s];
      }
    }
    x = std::move(next);
    if (iter >= options.max_iters / 2) {
      for (int i = 0; i < n; ++i) {
        for (int s = 0; s < game.num_strategies(i); ++s) average[i][s] += x[i][s];
      }
      ++averaged;
    }
  }
  if (averaged > 0) {
    for (auto& row : average) {
      for (auto& v : row) v /= averaged;
    }
  } else {
    average = x;
  }
  return {x, average, ConstrainedResidual(game, x, tremble) < options.tol};
}

// Every combination of nonempty supports, capped for larger games.
std::vector<ConstrainedEquilibrium> SupportScan(const StrategicGame& game,
                                                const TrembleProfile& tremble,
                                                const EquilibriumOptions& options) {
  constexpr long kMaxCombinations = 4096;
  const int n = game.num_players();
  long combos = 1;
  for (int i = 0; i < n; ++i) {
    combos *= (1L << game.num_strategies(i)) - 1;
    if (combos > kMaxCombinations) return {};
  }
  const auto floors = FloorsDouble(tremble);
  std::vector<ConstrainedEquilibrium> found;
  std::vector<int> mask(n, 1);
  for (long c = 0; c < combos; ++c) {
    long rest = c;
    std::vector<std::vector<int>> active(n);
    DoubleProfile start = floors;
    for (int i = 0; i < n; ++i) {
      const long options_i = (1L << game.num_strategies(i)) - 1;
      mask[i] = static_cast<int>(rest % options_i) + 1;
      rest /= options_i;
      for (int s = 0; s < game.num_strategies(i); ++s) {
        if (mask[i] & (1 << s)) active[i].push_back(s);
      }
      const double surplus = 1.0 - std::accumulate(floors[i].begin(), floors[i].end(), 0.0);
      for (int s : active[i]) start[i][s] += surplus / active[i].size();
    }
    const auto solved = SolveSupport(game, floors, active, start);
    if (!solved || ConstrainedResidual(game, *solved, tremble) >= options.tol) continue;
    if (auto eq = Finalize(game, tremble, *solved, options)) found.push_back(std::move(*eq));
  }
  return found;
}

std::optional<ConstrainedEquilibrium> Polish(const StrategicGame& game,
                                             const TrembleProfile& tremble,
                                             const DampedResult& damped,
                                             const EquilibriumOptions& options) {
  const auto floors = FloorsDouble(tremble);
  if (damped.converged) {
    if (auto eq = Finalize(game, tremble, damped.point, options)) return eq;
  }
  for (const DoubleProfile* guess : {&damped.point, &damped.average}) {
    for (double threshold : {1e-6, 1e-3}) {
      const auto active = ActiveSets(*guess, floors, threshold);
      const auto solved = SolveSupport(game, floors, active, *guess);
      if (!solved || ConstrainedResidual(game, *solved, tremble) >= options.tol) continue;
      if (auto eq = Finalize(game, tremble, *solved, options)) return eq;
    }
  }
  return std::nullopt;
}

bool LexLess(const MixedProfile& a, const MixedProfile& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t s = 0; s < a[i].size(); ++s) {
      if (a[i][s] != b[i][s]) return a[i][s] < b[i][s];
    }
  }
  return false;
}

constexpr double kClusterRadius = 1e-6;

void AddDistinct(std::vector<MixedProfile>& out, const MixedProfile& profile) {
  const auto d = ToDouble(profile);
  for (const auto& existing : out) {
    if (Distance(ToDouble(existing), d) < kClusterRadius) return;
  }
  out.push_back(profile);
}

DoubleProfile RandomInterior(const StrategicGame& game, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp(1.0);
  DoubleProfile x(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    double total = 0;
    for (int s = 0; s < game.num_strategies(i); ++s) {
      x[i].push_back(exp(rng) + 1e-9);
      total += x[i].back();
    }
    for (auto& v : x[i]) v /= total;
  }
  return x;
}

// Pure corners first, then random interior points.
std::vector<DoubleProfile> Starts(const StrategicGame& game, int count, std::uint64_t seed) {
  std::vector<DoubleProfile> starts;
  const int corners = std::min(game.num_profiles(), count / 2);
  for (int profile = 0; profile < corners; ++profile) {
    DoubleProfile x(game.num_players());
    for (int i = 0; i < game.num_players(); ++i) {
      x[i].assign(game.num_strategies(i), 0.0);
      x[i][game.StrategyAt(profile, i)] = 1.0;
    }
    starts.push_back(std::move(x));
  }
  std::mt19937_64 rng(seed);
  while (static_cast<int>(starts.size()) < count) starts.push_back(RandomInterior(game, rng));
  return starts;
}

// Moves a point into the floored simplex, keeping its shape.
DoubleProfile ProjectToFloors(const DoubleProfile& x, const std::vector<std::vector<double>>& floors) {
  DoubleProfile out = x;
  for (size_t i = 0; i < x.size(); ++i) {
    const double surplus = 1.0 - std::accumulate(floors[i].begin(), floors[i].end(), 0.0);
    for (size_t s = 0; s < x[i].size(); ++s) out[i][s] = floors[i][s] + surplus * x[i][s];
  }
  return out;
}

Rational NashGap(const StrategicGame& game, const MixedProfile& mixed) {
  Rational gap = 0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto values = PayoffVector(game, i, mixed);
    const Rational best = *std::max_element(values.begin(), values.end());
    for (int s = 0; s < game.num_strategies(i); ++s) {
      if (mixed[i][s] > 0) gap = std::max(gap, Rational(best - values[s]));
    }
  }
  return gap;
}

// Re-solves the final point's support with zero floors.
std::optional<MixedProfile> LimitOf(const StrategicGame& game, const MixedProfile& last,
                                    const TrembleProfile& tremble) {
  const int n = game.num_players();
  const auto point = ToDouble(last);
  const auto floors = FloorsDouble(tremble);
  std::vector<std::vector<double>> zeros(n);
  for (int i = 0; i < n; ++i) zeros[i].assign(game.num_strategies(i), 0.0);
  const auto active = ActiveSets(point, floors, 1e-9);
  DoubleProfile start = zeros;
  for (int i = 0; i < n; ++i) {
    double total = 0;
    for (int s : active[i]) total += point[i][s];
    for (int s : active[i]) start[i][s] = point[i][s] / total;
  }
  std::vector<DoubleProfile> candidates;
  if (auto solved = SolveSupport(game, zeros, active, start)) candidates.push_back(*solved);
  candidates.push_back(start);
  const Rational tol(1, 1000000000);
  for (const auto& candidate : candidates) {
    MixedProfile profile(n);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      int largest = 0;
      for (int s = 0; s < game.num_strategies(i); ++s) {
        const double v = candidate[i][s];
        if (v < -1e-12) ok = false;
        profile[i].push_back(v <= 1e-12 ? Rational(0) : NearbyRational(v, 1e-10));
        if (v > candidate[i][largest]) largest = s;
      }
      Rational rest = 1;
      for (int s = 0; s < game.num_strategies(i); ++s) {
        if (s != largest) rest -= profile[i][s];
      }
      profile[i][largest] = rest;
      if (rest < 0) ok = false;
    }
    if (ok && NashGap(game, profile) <= tol) return profile;
  }
  return std::nullopt;
}

}  // namespace

TrembleProfile TrembleProfile::Scaled(const Rational& factor) const {
  TrembleProfile out = *this;
  for (auto& row : out.floors) {
    for (auto& f : row) f *= factor;
  }
  return out;
}

TrembleProfile UniformTrembles(const StrategicGame& game, const Rational& epsilon) {
  TrembleProfile t;
  for (int i = 0; i < game.num_players(); ++i) {
    t.floors.emplace_back(game.num_strategies(i), epsilon);
  }
  CheckShape(game, t);
  return t;
}

std::vector<int> CompatibilityRanks(const CompatibilityDigraph& digraph) {
  const int n = static_cast<int>(digraph.nodes.size());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int v = 0; v < n; ++v) reach[v][v] = true;
  for (const auto& e : digraph.edges) reach[digraph.NodeIndex(e.from)][digraph.NodeIndex(e.to)] = true;
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < n; ++a) {
      if (!reach[a][k]) continue;
      for (int b = 0; b < n; ++b) {
        if (reach[k][b]) reach[a][b] = true;
      }
    }
  }
  // Longest path to a sink, counting only steps that leave a component.
  std::vector<int> rank(n, -1);
  std::function<int(int)> visit = [&](int v) {
    if (rank[v] >= 0) return rank[v];
    int best = 0;
    for (int w = 0; w < n; ++w) {
      if (reach[v][w] && !reach[w][v]) best = std::max(best, visit(w) + 1);
    }
    return rank[v] = best;
  };
  for (int v = 0; v < n; ++v) visit(v);
  return rank;
}

TrembleProfile PlayerCompatibleTrembles(const StrategicGame& game,
                                        const CompatibilityDigraph& digraph,
                                        const Rational& base, const Rational& ratio) {
  if (base <= 0) throw PreconditionError("tremble base must be positive");
  if (ratio < 1) throw PreconditionError("tremble ratio must be at least 1");
  const auto ranks = CompatibilityRanks(digraph);
  TrembleProfile t;
  for (int i = 0; i < game.num_players(); ++i) {
    RationalVector row;
    for (int s = 0; s < game.num_strategies(i); ++s) {
      const int node = digraph.NodeIndex({i, s});
      Rational level = base;
      for (int r = 0; node >= 0 && r < ranks[node]; ++r) level *= ratio;
      row.push_back(level);
    }
    t.floors.push_back(std::move(row));
  }
  CheckShape(game, t);
  return t;
}

bool IsPlayerCompatible(const TrembleProfile& tremble, const CompatibilityDigraph& digraph) {
  for (const auto& e : digraph.edges) {
    if (tremble.floors.at(e.from.player).at(e.from.strategy) <
        tremble.floors.at(e.to.player).at(e.to.strategy)) {
      return false;
    }
  }
  return true;
}

bool VerifyEpsilonEquilibrium(const StrategicGame& game, const MixedProfile& profile,
                              const TrembleProfile& tremble, const Rational& tol) {
  CheckShape(game, tremble);
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw PreconditionError("profile has the wrong number of players");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (static_cast<int>(profile[i].size()) != game.num_strategies(i) || Sum(profile[i]) != 1) {
      throw PreconditionError("profile row for " + game.player(i) + " is not a distribution");
    }
    for (int s = 0; s < game.num_strategies(i); ++s) {
      if (profile[i][s] < tremble.floors[i][s]) {
        throw PreconditionError("profile puts less than the floor on " + game.player(i) + ":" +
                                game.strategies(i)[s]);
      }
    }
  }
  for (int i = 0; i < game.num_players(); ++i) {
    const auto values = PayoffVector(game, i, profile);
    const Rational best = *std::max_element(values.begin(), values.end());
    for (int s = 0; s < game.num_strategies(i); ++s) {
      if (profile[i][s] > tremble.floors[i][s] && values[s] < best - tol) return false;
    }
  }
  return true;
}

double ConstrainedResidual(const StrategicGame& game, const std::vector<std::vector<double>>& profile,
                           const TrembleProfile& tremble) {
  double worst = 0;
  for (int i = 0; i < game.num_players(); ++i) {
    const auto values = PayoffVector(game, i, profile);
    const double best = *std::max_element(values.begin(), values.end());
    double gap = 0;
    for (int s = 0; s < game.num_strategies(i); ++s) {
      gap += (profile[i][s] - ToDouble(tremble.floors[i][s])) * (best - values[s]);
    }
    worst = std::max(worst, gap);
  }
  return worst;
}

std::optional<ConstrainedEquilibrium> EpsilonEquilibriumFrom(
    const StrategicGame& game, const TrembleProfile& tremble,
    const std::vector<std::vector<double>>& start, const EquilibriumOptions& options) {
  CheckShape(game, tremble);
  const auto floors = FloorsDouble(tremble);
  const auto damped = DampedBestResponse(game, floors, tremble, ProjectToFloors(start, floors), options);
  return Polish(game, tremble, damped, options);
}

EquilibriumSearch EpsilonEquilibria(const StrategicGame& game, const TrembleProfile& tremble,
                                    const EquilibriumOptions& options) {
  CheckShape(game, tremble);
  EquilibriumSearch search;
  std::vector<MixedProfile> distinct;
  std::vector<ConstrainedEquilibrium> points;
  auto add = [&](ConstrainedEquilibrium eq) {
    const size_t before = distinct.size();
    AddDistinct(distinct, eq.profile);
    if (distinct.size() > before) points.push_back(std::move(eq));
  };
  for (const auto& start : Starts(game, options.starts, options.seed)) {
    if (auto eq = EpsilonEquilibriumFrom(game, tremble, start, options)) {
      ++search.converged_starts;
      add(std::move(*eq));
    } else {
      ++search.failed_starts;
    }
  }
  if (search.failed_starts > 0 || points.empty()) {
    for (auto& eq : SupportScan(game, tremble, options)) add(std::move(eq));
  }
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return LexLess(a.profile, b.profile); });
  search.points = std::move(points);
  return search;
}

PceTrace PceApproximate(const StrategicGame& game, const CompatibilityDigraph& digraph,
                        const PceSchedule& schedule, const EquilibriumOptions& options) {
  if (schedule.steps < 1) throw PreconditionError("schedule needs at least one step");
  if (schedule.decay <= 0 || schedule.decay >= 1) {
    throw PreconditionError("schedule decay must lie strictly between 0 and 1");
  }
  PceTrace trace;
  TrembleProfile current = PlayerCompatibleTrembles(game, digraph, schedule.base, schedule.ratio);
  for (int t = 0; t < schedule.steps; ++t) {
    trace.schedule.push_back(current);
    current = current.Scaled(schedule.decay);
  }

  // One run per start; runs that meet at a step share the rest of the path.
  std::vector<PceTraceRun> runs;
  for (const auto& start : Starts(game, options.starts, options.seed)) {
    PceTraceRun run;
    DoubleProfile x = start;
    for (int t = 0; t < schedule.steps; ++t) {
      auto eq = EpsilonEquilibriumFrom(game, trace.schedule[t], x, options);
      if (!eq) {
        // Fall back to the support scan and continue from the nearest point.
        const auto scanned = SupportScan(game, trace.schedule[t], options);
        const auto floors = FloorsDouble(trace.schedule[t]);
        const auto projected = ProjectToFloors(x, floors);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& cand : scanned) {
          const double d = Distance(ToDouble(cand.profile), projected);
          if (d < best) {
            best = d;
            eq = cand;
          }
        }
      }
      if (!eq) {
        run.status = "no converged point at step " + std::to_string(t);
        break;
      }
      x = ToDouble(eq->profile);
      run.points.push_back(std::move(eq->profile));
    }
    if (run.status.empty()) {
      run.limit = LimitOf(game, run.points.back(), trace.schedule.back());
      run.limit_is_nash = run.limit.has_value();
      run.status = run.limit ? "converged" : "limit failed the Nash check";
    }
    bool duplicate = false;
    for (const auto& other : runs) {
      if (other.points.size() == run.points.size() && !run.points.empty() &&
          Distance(ToDouble(other.points.back()), ToDouble(run.points.back())) < 1e-12 &&
          other.status == run.status) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) runs.push_back(std::move(run));
  }
  for (const auto& run : runs) {
    if (run.limit) {
      AddDistinct(trace.limits, *run.limit);
    } else {
      ++trace.inconclusive;
    }
  }
  std::sort(trace.limits.begin(), trace.limits.end(), LexLess);
  trace.runs = std::move(runs);
  return trace;
}

bool RespectsEdges(const CompatibilityDigraph& digraph, const MixedProfile& profile, int k) {
  for (const auto& e : digraph.edges) {
    if (e.from.player == k || e.to.player == k) continue;
    if (profile[e.from.player][e.from.strategy] < profile[e.to.player][e.to.strategy]) return false;
  }
  return true;
}

RefuteReport PceRefute(const StrategicGame& game, const CompatibilityDigraph& digraph,
                       const MixedProfile& sigma_star, const RefuteOptions& options) {
  const int n = game.num_players();
  if (static_cast<int>(sigma_star.size()) != n) throw PreconditionError("profile has the wrong shape");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(sigma_star[i].size()) != game.num_strategies(i) || Sum(sigma_star[i]) != 1) {
      throw PreconditionError("profile row for " + game.player(i) + " is not a distribution");
    }
  }
  if (!IsNash(game, sigma_star)) throw PreconditionError("profile is not a Nash equilibrium");
  if (options.floor_delta <= 0) throw PreconditionError("floor_delta must be positive");
  std::vector<Rational> etas = options.eta_grid;
  std::sort(etas.begin(), etas.end());

  // Grid directions tau for one player: compositions of the resolution.
  auto compositions = [&](int parts) {
    std::vector<RationalVector> out;
    std::vector<int> c(parts, 0);
    std::function<void(int, int)> rec = [&](int idx, int left) {
      if (idx == parts - 1) {
        c[idx] = left;
        RationalVector tau;
        for (int v : c) tau.push_back(Rational(v, options.grid_resolution));
        for (auto& q : tau) q.canonicalize();
        out.push_back(std::move(tau));
        return;
      }
      for (int v = 0; v <= left; ++v) {
        c[idx] = v;
        rec(idx + 1, left - v);
      }
    };
    rec(0, options.grid_resolution);
    return out;
  };

  RefuteReport report;
  for (int k = 0; k < n; ++k) {
    for (int bar = 0; bar < game.num_strategies(k); ++bar) {
      if (sigma_star[k][bar] == 0) continue;
      RefuteEntry entry{k, bar, std::nullopt, std::nullopt, 0};
      auto try_candidate = [&](const std::vector<RationalVector>& taus, const Rational& t) {
        MixedProfile cand = sigma_star;
        for (int m = 0; m < n; ++m) {
          if (m == k) continue;
          for (int s = 0; s < game.num_strategies(m); ++s) {
            cand[m][s] = (1 - t) * sigma_star[m][s] + t * taus[m][s];
            if (cand[m][s] < options.floor_delta) return false;
          }
        }
        ++entry.candidates_checked;
        if (!RespectsEdges(digraph, cand, k)) return false;
        const auto br = BestResponses(game, k, cand);
        if (!std::binary_search(br.begin(), br.end(), bar)) return false;
        entry.witness = cand;
        return true;
      };

      std::vector<std::vector<RationalVector>> grids(n);
      long combos = 1;
      for (int m = 0; m < n; ++m) {
        if (m == k) continue;
        grids[m] = compositions(game.num_strategies(m));
        combos *= static_cast<long>(grids[m].size());
      }
      std::mt19937_64 rng(options.seed + 1000003ULL * k + bar);
      for (const auto& eta : etas) {
        // Radii eta, eta/4, ... while the smallest grid step clears the floor.
        std::vector<Rational> radii;
        for (Rational t = eta; t / options.grid_resolution >= options.floor_delta; t /= 4) {
          radii.push_back(t);
        }
        bool found = false;
        if (combos <= 20000) {
          for (const auto& t : radii) {
            for (long c = 0; c < combos && !found; ++c) {
              long rest = c;
              std::vector<RationalVector> taus(n);
              for (int m = 0; m < n; ++m) {
                if (m == k) continue;
                taus[m] = grids[m][rest % grids[m].size()];
                rest /= static_cast<long>(grids[m].size());
              }
              found = try_candidate(taus, t);
            }
            if (found) break;
          }
        }
        std::uniform_int_distribution<int> weight(1, 1000);
        for (int sample = 0; sample < options.samples && !found; ++sample) {
          std::vector<RationalVector> taus(n);
          for (int m = 0; m < n; ++m) {
            if (m == k) continue;
            RationalVector w;
            Rational total = 0;
            for (int s = 0; s < game.num_strategies(m); ++s) {
              w.emplace_back(weight(rng));
              total += w.back();
            }
            for (auto& v : w) v /= total;
            taus[m] = std::move(w);
          }
          // Log-uniform radius in (0, eta].
          const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
          Rational t = eta * NearbyRational(std::pow(1e-3, u), 1e-6);
          found = try_candidate(taus, t);
        }
        if (found) {
          entry.witness_eta = eta;
          break;
        }
      }
      if (!entry.witness) report.refuted = true;
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

std::vector<std::vector<double>> ToDouble(const MixedProfile& profile) {
  std::vector<std::vector<double>> out;
  for (const auto& row : profile) {
    std::vector<double> d;
    for (const auto& v : row) d.push_back(ToDouble(v));
    out.push_back(std::move(d));
  }
  return out;
}

Rational NearbyRational(double value, double tolerance) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  // Convergents of the continued fraction of value.
  mpz_class h_prev = 1, h = static_cast<long>(std::floor(value));
  mpz_class k_prev = 0, k = 1;
  double frac = value - std::floor(value);
  for (int iter = 0; iter < 40; ++iter) {
    Rational approx(h, k);
    approx.canonicalize();
    if (std::abs(ToDouble(approx) - value) <= tolerance) return approx;
    if (frac < 1e-15) break;
    const double inv = 1.0 / frac;
    const long a = static_cast<long>(std::floor(inv));
    frac = inv - a;
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    if (k > mpz_class("1000000000000")) break;
  }
  return FromDouble(value);
}

}  // namespace pce
