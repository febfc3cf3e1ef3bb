// pce: command-line front end. Every command builds a JSON report
// (command, config, results, provenance). The report goes to --out when
// given and to stdout with --json; otherwise a text summary is printed.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pce/compatibility.h"
#include "pce/errors.h"
#include "pce/factorability.h"
#include "pce/game_io.h"
#include "pce/learning.h"
#include "pce/reproduction.h"
#include "pce/tremble.h"

namespace pce {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitReproduction = 4;

// Argument errors share the schema exit code.
class ArgumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string out;
  bool json = false;
};

void Emit(const Output& output, const Json& report, const std::string& text) {
  const std::string body = FormatJson(report);
  if (!output.out.empty()) {
    std::ofstream file(output.out);
    if (!file) throw ArgumentError("cannot write " + output.out);
    file << body;
  }
  if (output.json) {
    std::cout << body;
  } else {
    std::cout << text;
  }
}

Json Report(const std::string& command, const std::vector<std::string>& argv, Json config,
            Json results, std::uint64_t seed, Json tolerances) {
  Json report;
  report["version"] = 1;
  report["command"] = command;
  Json args = Json::array();
  for (const auto& a : argv) args.push_back(a);
  report["arguments"] = args;
  report["config"] = std::move(config);
  report["results"] = std::move(results);
  report["provenance"] = Provenance(seed, tolerances);
  return report;
}

Rational ParseFlagRational(const std::string& flag, const std::string& text) {
  try {
    return ParseRational(text);
  } catch (const std::invalid_argument&) {
    throw ArgumentError(flag + ": not a rational number: " + text);
  }
}

Json ProfileToJson(const StrategicGame& g, const MixedProfile& m) {
  Json out = Json::object();
  for (int i = 0; i < g.num_players(); ++i) {
    Json row = Json::object();
    for (int s = 0; s < g.num_strategies(i); ++s) row[g.strategies(i)[s]] = ToString(m[i][s]);
    out[g.player(i)] = row;
  }
  return out;
}

std::string ProfileText(const StrategicGame& g, const MixedProfile& m) {
  std::string out;
  for (int i = 0; i < g.num_players(); ++i) {
    out += (i ? "  " : "") + g.player(i) + "(";
    bool first = true;
    for (int s = 0; s < g.num_strategies(i); ++s) {
      if (m[i][s] == 0) continue;
      out += (first ? "" : " ") + g.strategies(i)[s];
      if (m[i][s] != 1) out += "=" + ToString(m[i][s]);
      first = false;
    }
    out += ")";
  }
  return out;
}

std::string Ref(const StrategicGame& g, StrategyRef r) {
  return g.player(r.player) + ":" + g.strategies(r.player)[r.strategy];
}

// Strategic form for the analysis commands, optionally after iterated
// removal of strictly dominated strategies.
struct AnalysisGame {
  StrategicGame game;
  std::optional<ReducedGame> reduced;
  const StrategicGame& full() const { return game; }
  const StrategicGame& used() const { return reduced ? reduced->game : game; }
};

AnalysisGame Prepare(const GameDocument& doc, bool reduce) {
  AnalysisGame a{StrategicFormOf(doc), std::nullopt};
  if (reduce) {
    a.reduced = RemoveStrictlyDominated(a.game);
  } else if (auto dominated = ValidateNoStrictDominance(a.game)) {
    throw PreconditionError("strategy " + Ref(a.game, *dominated) +
                            " is strictly dominated (rerun with --reduce)");
  }
  return a;
}

Json ReductionJson(const AnalysisGame& a) {
  if (!a.reduced) return nullptr;
  Json removed = Json::array();
  for (int i = 0; i < a.game.num_players(); ++i) {
    for (int s = 0; s < a.game.num_strategies(i); ++s) {
      const auto& kept = a.reduced->kept[i];
      if (std::find(kept.begin(), kept.end(), s) == kept.end()) removed.push_back(Ref(a.game, {i, s}));
    }
  }
  return removed;
}

// --pure takes one label per player; --mixed a JSON array of rows.
MixedProfile ReadProfile(const StrategicGame& g, const std::vector<std::string>& pure,
                         const std::string& mixed) {
  if (pure.empty() == mixed.empty()) throw ArgumentError("give exactly one of --pure and --mixed");
  MixedProfile m;
  if (!pure.empty()) {
    if (static_cast<int>(pure.size()) != g.num_players()) {
      throw ArgumentError("--pure needs one strategy label per player");
    }
    for (int i = 0; i < g.num_players(); ++i) {
      const int s = g.StrategyIndex(i, pure[i]);
      if (s < 0) throw ArgumentError("--pure: unknown strategy '" + pure[i] + "' for " + g.player(i));
      RationalVector row(g.num_strategies(i), Rational(0));
      row[s] = 1;
      m.push_back(row);
    }
    return m;
  }
  Json rows;
  try {
    rows = Json::parse(mixed);
  } catch (const Json::parse_error&) {
    throw ArgumentError("--mixed: invalid JSON");
  }
  if (!rows.is_array() || static_cast<int>(rows.size()) != g.num_players()) {
    throw ArgumentError("--mixed needs one probability row per player");
  }
  for (int i = 0; i < g.num_players(); ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != g.num_strategies(i)) {
      throw ArgumentError("--mixed: row " + std::to_string(i) + " has the wrong length");
    }
    RationalVector r;
    Rational total = 0;
    for (const auto& v : row) {
      r.push_back(ParseFlagRational("--mixed", v.is_string() ? v.get<std::string>() : v.dump()));
      if (r.back() < 0) throw ArgumentError("--mixed: negative probability");
      total += r.back();
    }
    if (total != 1) throw ArgumentError("--mixed: row " + std::to_string(i) + " does not sum to 1");
    m.push_back(r);
  }
  return m;
}

int PlayerArg(const ExtensiveGame& g, const std::string& name) {
  const int i = g.PlayerIndex(name);
  if (i < 0) throw ArgumentError("unknown player '" + name + "'");
  return i;
}

std::string SetList(const ExtensiveGame& g, const std::vector<int>& sets) {
  std::string out = "{";
  for (size_t k = 0; k < sets.size(); ++k) out += (k ? ", " : "") + g.infoset(sets[k]).id;
  return out + "}";
}

Json SetJson(const ExtensiveGame& g, const std::vector<int>& sets) {
  Json out = Json::array();
  for (int h : sets) out.push_back(g.infoset(h).id);
  return out;
}

const ExtensiveGame& RequireExtensive(const GameDocument& doc) {
  if (doc.kind != GameKind::kExtensive) {
    throw SchemaError("/kind", "this command needs an extensive game, got " + KindName(doc.kind));
  }
  return *doc.extensive;
}

// ------------------------------------------------------------------ analyze

struct AnalyzeArgs {
  std::string file;
  bool reduce = false;
};

Json AnalyzeCommand(const AnalyzeArgs& args, const std::vector<std::string>& argv,
                    std::string& text) {
  const auto doc = LoadGameFile(args.file);
  const auto a = Prepare(doc, args.reduce);
  const StrategicGame& g = a.used();
  const auto d = BuildCompatibilityDigraph(g);
  Json nodes = Json::array();
  for (const auto& n : d.nodes) nodes.push_back(Ref(g, n));
  Json edges = Json::array();
  std::ostringstream out;
  out << "game " << (doc.name.empty() ? args.file : doc.name) << ": " << d.nodes.size()
      << " strategies, " << d.edges.size() << " compatibility edges\n";
  for (const auto& e : d.edges) {
    edges.push_back(Json{{"from", Ref(g, e.from)}, {"to", Ref(g, e.to)}, {"vacuous", e.vacuous}});
    out << "  " << Ref(g, e.from) << "  >=  " << Ref(g, e.to) << (e.vacuous ? "  (vacuous)" : "")
        << "\n";
  }
  text = out.str();
  Json results{{"kind", KindName(doc.kind)}, {"removed", ReductionJson(a)}, {"nodes", nodes},
               {"edges", edges}};
  return Report("analyze", argv, Json{{"file", args.file}, {"reduce", args.reduce}}, results, 0,
                Json::object());
}

// ---------------------------------------------------------------- solve-pce

struct SolveArgs {
  std::string file;
  bool reduce = false;
  std::string base = "1/16";
  std::string decay = "1/2";
  std::string ratio = "2";
  int steps = 20;
  int starts = 64;
  std::uint64_t seed = 1;
};

Json SolveCommand(const SolveArgs& args, const std::vector<std::string>& argv, std::string& text) {
  const auto doc = LoadGameFile(args.file);
  PceSchedule schedule;
  schedule.base = ParseFlagRational("--base", args.base);
  schedule.decay = ParseFlagRational("--decay", args.decay);
  schedule.ratio = ParseFlagRational("--ratio", args.ratio);
  schedule.steps = args.steps;
  if (args.steps < 1) throw ArgumentError("--steps must be at least 1");
  if (args.starts < 1) throw ArgumentError("--starts must be at least 1");
  EquilibriumOptions opts;
  opts.starts = args.starts;
  opts.seed = args.seed;
  const auto a = Prepare(doc, args.reduce);
  const StrategicGame& g = a.used();
  const auto d = BuildCompatibilityDigraph(g);
  const auto trace = PceApproximate(g, d, schedule, opts);

  Json runs = Json::array();
  for (const auto& run : trace.runs) {
    Json r{{"status", run.status}, {"steps", run.points.size()}};
    r["limit"] = run.limit ? ProfileToJson(g, *run.limit) : Json(nullptr);
    r["limit_is_nash"] = run.limit_is_nash;
    runs.push_back(r);
  }
  Json limits = Json::array();
  std::ostringstream out;
  out << "schedule: base " << args.base << ", ratio " << args.ratio << ", decay " << args.decay
      << ", " << args.steps << " steps; " << trace.runs.size() << " runs, "
      << trace.inconclusive << " inconclusive\n";
  out << trace.limits.size() << " distinct limit(s):\n";
  for (const auto& limit : trace.limits) {
    limits.push_back(ProfileToJson(g, limit));
    out << "  " << ProfileText(g, limit) << "\n";
  }
  text = out.str();
  Json floors = Json::array();
  for (const auto& t : trace.schedule) {
    Json step = Json::array();
    for (const auto& row : t.floors) {
      Json r = Json::array();
      for (const auto& v : row) r.push_back(ToString(v));
      step.push_back(r);
    }
    floors.push_back(step);
  }
  Json config{{"file", args.file}, {"reduce", args.reduce}, {"base", ToString(schedule.base)},
              {"decay", ToString(schedule.decay)}, {"ratio", ToString(schedule.ratio)},
              {"steps", args.steps}, {"starts", args.starts}};
  Json results{{"removed", ReductionJson(a)}, {"schedule_floors", floors}, {"runs", runs},
               {"limits", limits}, {"inconclusive", trace.inconclusive}};
  return Report("solve-pce", argv, config, results, args.seed,
                Json{{"solver", opts.tol}, {"verify", ToString(opts.verify_tol)}});
}

// ------------------------------------------------------------------- refute

struct ProfileArgs {
  std::string file;
  bool reduce = false;
  std::vector<std::string> pure;
  std::string mixed;
  int samples = 2000;
  std::uint64_t seed = 7;
};

Json RefuteCommand(const ProfileArgs& args, const std::vector<std::string>& argv,
                   std::string& text) {
  const auto doc = LoadGameFile(args.file);
  const auto a = Prepare(doc, args.reduce);
  const MixedProfile star_full = ReadProfile(a.full(), args.pure, args.mixed);
  MixedProfile star = star_full;
  if (a.reduced) {
    try {
      star = a.reduced->Restrict(star_full);
    } catch (const std::invalid_argument& e) {
      throw PreconditionError(std::string("profile uses a removed strategy: ") + e.what());
    }
  }
  const StrategicGame& g = a.used();
  RefuteOptions opts;
  opts.samples = args.samples;
  opts.seed = args.seed;
  const auto report = PceRefute(g, BuildCompatibilityDigraph(g), star, opts);
  Json entries = Json::array();
  std::ostringstream out;
  out << "profile " << ProfileText(g, star) << ": "
      << (report.refuted ? "REFUTED" : "not refuted") << "\n";
  for (const auto& e : report.entries) {
    Json item{{"strategy", Ref(g, {e.player, e.strategy})},
              {"candidates_checked", e.candidates_checked}};
    item["witness"] = e.witness ? ProfileToJson(g, *e.witness) : Json(nullptr);
    item["witness_eta"] = e.witness_eta ? Json(ToString(*e.witness_eta)) : Json(nullptr);
    entries.push_back(item);
    out << "  " << Ref(g, {e.player, e.strategy}) << ": "
        << (e.witness ? "witness at eta " + ToString(*e.witness_eta) : std::string("no witness"))
        << "\n";
  }
  text = out.str();
  Json eta = Json::array();
  for (const auto& v : opts.eta_grid) eta.push_back(ToString(v));
  Json config{{"file", args.file}, {"reduce", args.reduce}, {"profile", ProfileToJson(a.full(), star_full)},
              {"samples", args.samples}, {"eta_grid", eta}};
  return Report("refute", argv, config,
                Json{{"removed", ReductionJson(a)}, {"refuted", report.refuted}, {"entries", entries}},
                args.seed, Json{{"floor_delta", ToString(opts.floor_delta)}});
}

// ---------------------------------------------------------------- criterion

Json CriterionCommand(const ProfileArgs& args, const std::vector<std::string>& argv,
                      std::string& text) {
  const auto doc = LoadGameFile(args.file);
  if (doc.kind != GameKind::kSignaling) {
    throw SchemaError("/kind", "this command needs a signaling game, got " + KindName(doc.kind));
  }
  const SignalingGame& sg = *doc.signaling;
  const StrategicGame g = SignalingToStrategic(sg);
  const MixedProfile eq = ReadProfile(g, args.pure, args.mixed);
  const auto verdict = CheckCompatibilityCriterion(sg, eq);
  Json failures = Json::array();
  std::ostringstream out;
  out << "profile " << ProfileText(g, eq) << ": "
      << (verdict.passes ? "passes" : "FAILS") << " the compatibility criterion\n";
  for (const auto& f : verdict.failures) {
    failures.push_back(Json{{"signal", sg.signals[f.signal]},
                            {"action", sg.actions[f.action]},
                            {"reason", f.reason}});
    out << "  after " << sg.signals[f.signal] << ", " << sg.actions[f.action] << ": " << f.reason
        << "\n";
  }
  text = out.str();
  return Report("criterion", argv, Json{{"file", args.file}, {"profile", ProfileToJson(g, eq)}},
                Json{{"passes", verdict.passes}, {"failures", failures}}, 0, Json::object());
}

// --------------------------------------------------------- check-factorable

struct FactorArgs {
  std::string file;
  std::vector<std::string> players;
  std::vector<std::string> pair;
};

Json FactorCommand(const FactorArgs& args, const std::vector<std::string>& argv,
                   std::string& text) {
  const auto doc = LoadGameFile(args.file);
  const ExtensiveGame& g = RequireExtensive(doc);
  std::vector<int> players;
  for (const auto& name : args.players) players.push_back(PlayerArg(g, name));
  std::vector<int> pair;
  for (const auto& name : args.pair) pair.push_back(PlayerArg(g, name));
  if (players.empty() && pair.empty()) {
    for (int i = 0; i < g.num_players(); ++i) {
      if (!g.player_infosets(i).empty()) players.push_back(i);
    }
  }
  if (auto v = g.MovesTwiceViolation()) throw PreconditionError(*v);

  std::ostringstream out;
  Json analyses = Json::array();
  std::map<int, FactorResult> factors;
  for (int i : players) {
    const auto result = Factor(g, i);
    factors[i] = result;
    Json item{{"player", g.player(i)}, {"factorable", result.factoring.has_value()}};
    out << g.player(i) << ": " << (result.factoring ? "factorable" : "NOT factorable") << "\n";
    if (result.factoring) {
      Json fmap = Json::object();
      for (int s = 0; s < g.num_strategies(i); ++s) {
        fmap[g.StrategyLabel(i, s)] = SetJson(g, result.factoring->relevant[s]);
        out << "  F[" << g.StrategyLabel(i, s) << "] = " << SetList(g, result.factoring->relevant[s])
            << "\n";
      }
      item["factoring"] = fmap;
      const auto on_path = CheckRelevantSetsOnPath(g, i, *result.factoring);
      item["relevant_sets_on_path"] = !on_path.has_value();
      const auto aux = AdditiveSeparability(g, i, *result.factoring);
      item["additively_separable"] = aux.has_value();
      out << "  relevant sets on path: " << (on_path ? "no" : "yes")
          << "; additively separable: " << (aux ? "yes" : "no") << "\n";
    }
    Json violations = Json::array();
    for (const auto& v : result.violations) {
      Json vj{{"kind", v.kind == FactorViolation::Kind::kNotGenerated ? "not_generated" : "overlap"},
              {"strategy", g.StrategyLabel(i, v.strategy)},
              {"infosets", SetJson(g, v.infosets)},
              {"message", v.message}};
      if (v.kind == FactorViolation::Kind::kOverlap) {
        vj["other_strategy"] = g.StrategyLabel(i, v.other_strategy);
      } else {
        vj["payoff_blocks"] = v.payoff_blocks;
        vj["join_blocks"] = v.join_blocks;
      }
      violations.push_back(vj);
      out << "  violation: " << v.message << "\n";
    }
    item["violations"] = violations;
    const auto step = CheckOneStepProperty(g, i);
    Json sj{{"passes", step.passes}};
    if (!step.passes) {
      sj["infoset"] = g.infoset(step.infoset).id;
      Json profile = Json::array();
      for (size_t p = 0; p < step.strategies.size(); ++p) {
        profile.push_back(g.StrategyLabel(static_cast<int>(p), step.strategies[p]));
      }
      sj["profile"] = profile;
      out << "  one-step screen fails at " << g.infoset(step.infoset).id << "\n";
    }
    item["one_step"] = sj;
    const auto bp = IsBinaryParticipation(g, i);
    Json bj{{"holds", bp.holds}};
    if (bp.holds) {
      bj["in"] = g.StrategyLabel(i, bp.in);
      bj["out"] = g.StrategyLabel(i, bp.out);
    } else {
      bj["reason"] = bp.reason;
    }
    item["binary_participation"] = bj;
    out << "  binary participation: " << (bp.holds ? "yes" : "no") << "\n";
    analyses.push_back(item);
  }

  Json iso = nullptr;
  if (!pair.empty()) {
    if (pair.size() != 2) throw ArgumentError("--pair takes two players");
    if (pair[0] == pair[1]) throw ArgumentError("--pair needs two different players");
    const auto fi = Factor(g, pair[0]);
    const auto fj = Factor(g, pair[1]);
    iso = Json{{"players", {g.player(pair[0]), g.player(pair[1])}}};
    std::optional<std::vector<int>> phi;
    if (fi.factoring && fj.factoring) phi = IsomorphicFactoring(g, pair[0], pair[1], *fi.factoring, *fj.factoring);
    iso["isomorphic"] = phi.has_value();
    out << "pair " << g.player(pair[0]) << ", " << g.player(pair[1]) << ": ";
    if (!fi.factoring || !fj.factoring) {
      iso["reason"] = "not factorable for " + g.player(fi.factoring ? pair[1] : pair[0]);
      out << "no isomorphic factoring (" << iso["reason"].get<std::string>() << ")\n";
    } else if (!phi) {
      iso["reason"] = "no strategy bijection matches the third-party sets";
      out << "no isomorphic factoring\n";
    } else {
      Json map = Json::object();
      out << "phi =";
      for (size_t s = 0; s < phi->size(); ++s) {
        map[g.StrategyLabel(pair[0], static_cast<int>(s))] = g.StrategyLabel(pair[1], (*phi)[s]);
        out << " " << g.StrategyLabel(pair[0], static_cast<int>(s)) << "->"
            << g.StrategyLabel(pair[1], (*phi)[s]);
      }
      out << "\n";
      iso["phi"] = map;
    }
  }
  text = out.str();
  Json config{{"file", args.file}, {"players", args.players}, {"pair", args.pair}};
  return Report("check-factorable", argv, config, Json{{"players", analyses}, {"pair", iso}}, 0,
                Json::object());
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string file;
  std::string policy = "ucb";
  double gamma = 0.9;
  double delta = 0.9;
  std::string quantile = "default";
  double prior = 1;
  int paths = 1000;
  int horizon = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> pair;
  std::string strategy;
};

Json SimulateCommand(const SimulateArgs& args, const std::vector<std::string>& argv,
                     std::string& text) {
  if (args.paths < 1) throw ArgumentError("--paths must be at least 1");
  if (args.horizon < 0) throw ArgumentError("--horizon must be positive");
  if (!(args.gamma >= 0 && args.gamma < 1)) throw ArgumentError("--gamma must lie in [0, 1)");
  if (!(args.delta >= 0 && args.delta < 1)) throw ArgumentError("--delta must lie in [0, 1)");
  if (!(args.prior > 0)) throw ArgumentError("--prior must be positive");
  if (args.policy != "ucb" && args.policy != "opt") throw ArgumentError("--policy is ucb or opt");
  if (args.pair.size() != 2) throw ArgumentError("--pair takes two players");
  QuantileFunction q = DefaultQuantile;
  double constant_q = 0;
  if (args.quantile != "default") {
    try {
      size_t used = 0;
      constant_q = std::stod(args.quantile, &used);
      if (used != args.quantile.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ArgumentError("--quantile is 'default' or a level in (0, 1)");
    }
    if (!(constant_q > 0 && constant_q < 1)) throw ArgumentError("--quantile must lie in (0, 1)");
    q = [constant_q](int) { return constant_q; };
  }

  const auto doc = LoadGameFile(args.file);
  const ExtensiveGame& g = RequireExtensive(doc);
  const int i = PlayerArg(g, args.pair[0]), j = PlayerArg(g, args.pair[1]);
  if (i == j) throw ArgumentError("--pair needs two different players");
  MixedProfile sigma;
  std::string environment = "file";
  if (doc.environment) {
    sigma = *doc.environment;
  } else {
    environment = "uniform";
    for (int p = 0; p < g.num_players(); ++p) {
      sigma.push_back(RationalVector(g.num_strategies(p), Rational(1, g.num_strategies(p))));
    }
  }
  const LearningProblem pi(g, i), pj(g, j);
  const auto prior_i = BeliefState::Uniform(g, i, args.prior);
  const auto prior_j = BeliefState::Uniform(g, j, args.prior);
  std::unique_ptr<IndexPolicy> policy_i, policy_j;
  double index_bound = 0;
  if (args.policy == "ucb") {
    policy_i = std::make_unique<BayesUcbPolicy>(pi, prior_i, q, args.seed);
    policy_j = std::make_unique<BayesUcbPolicy>(pj, prior_j, q, args.seed);
  } else {
    auto gi = std::make_unique<GittinsPolicy>(pi, prior_i, args.delta * args.gamma);
    auto gj = std::make_unique<GittinsPolicy>(pj, prior_j, args.delta * args.gamma);
    index_bound = std::max(gi->truncation_bound(), gj->truncation_bound());
    policy_i = std::move(gi);
    policy_j = std::move(gj);
  }
  int strategy = 0;
  if (!args.strategy.empty()) {
    strategy = g.StrategyIndex(i, args.strategy);
    if (strategy < 0) throw ArgumentError("unknown strategy '" + args.strategy + "' for " + g.player(i));
  } else {
    // First strategy with something to learn.
    for (int s = 0; s < pi.num_strategies(); ++s) {
      if (!pi.relevant(s).empty()) {
        strategy = s;
        break;
      }
    }
  }
  const int horizon = args.horizon > 0 ? args.horizon : HorizonFor(args.gamma, 1e-9);
  const auto r = CoupledCompare(pi, *policy_i, pj, *policy_j, strategy, sigma, args.gamma,
                                args.paths, horizon, args.seed);
  const std::string si = g.StrategyLabel(i, r.strategy_i), sj = g.StrategyLabel(j, r.strategy_j);
  const bool within = r.freq_i - r.freq_j >= -2 * r.se_diff;

  Json phi = Json::object();
  for (size_t s = 0; s < r.phi.size(); ++s) {
    phi[g.StrategyLabel(i, static_cast<int>(s))] = g.StrategyLabel(j, r.phi[s]);
  }
  Json results{{"strategy_i", si},
               {"strategy_j", sj},
               {"phi", phi},
               {"freq_i", r.freq_i},
               {"freq_j", r.freq_j},
               {"se_i", r.se_i},
               {"se_j", r.se_j},
               {"se_diff", r.se_diff},
               {"paths", r.paths},
               {"dominated_paths", r.dominated_paths},
               {"dominance_rate", static_cast<double>(r.dominated_paths) / r.paths},
               {"first_violation", r.first_violation},
               {"freq_inequality_within_2se", within},
               {"horizon", horizon},
               {"lifetime_truncation", r.truncation_bound}};
  if (args.policy == "opt") results["index_truncation_bound"] = index_bound;

  char line[512];
  std::ostringstream out;
  std::snprintf(line, sizeof line, "%s vs %s, policy %s, gamma %g", g.player(i).c_str(),
                g.player(j).c_str(), args.policy.c_str(), args.gamma);
  out << line;
  if (args.policy == "opt") {
    std::snprintf(line, sizeof line, ", delta %g", args.delta);
    out << line;
  }
  out << ", " << r.paths << " paths, horizon " << horizon << "\n";
  std::snprintf(line, sizeof line,
                "  dominance on %d/%d paths (%.2f%%)\n  freq %s(%s) = %.6f (SE %.2e)\n"
                "  freq %s(%s) = %.6f (SE %.2e)\n  difference %.6f, paired SE %.2e: %s\n",
                r.dominated_paths, r.paths, 100.0 * r.dominated_paths / r.paths,
                g.player(i).c_str(), si.c_str(), r.freq_i, r.se_i, g.player(j).c_str(), sj.c_str(),
                r.freq_j, r.se_j, r.freq_i - r.freq_j, r.se_diff,
                within ? "inequality holds within 2 SE" : "inequality FAILS");
  out << line;
  text = out.str();

  Json sigma_json = Json::object();
  for (int p = 0; p < g.num_players(); ++p) {
    Json row = Json::object();
    for (int s = 0; s < g.num_strategies(p); ++s) row[g.StrategyLabel(p, s)] = ToString(sigma[p][s]);
    sigma_json[g.player(p)] = row;
  }
  Json config{{"file", args.file},
              {"policy", args.policy},
              {"gamma", args.gamma},
              {"delta", args.policy == "opt" ? Json(args.delta) : Json(nullptr)},
              {"quantile", args.policy == "ucb" ? Json(args.quantile) : Json(nullptr)},
              {"prior_count", args.prior},
              {"paths", args.paths},
              {"horizon", horizon},
              {"pair", {g.player(i), g.player(j)}},
              {"environment", environment},
              {"sigma", sigma_json}};
  return Report("simulate", argv, config, results, args.seed,
                Json{{"horizon_tail", 1e-9}, {"special_functions", 1e-12}});
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs {
  std::vector<int> only;
  std::string fixtures = PCE_DEFAULT_FIXTURE_DIR;
  int paths = 10000;
  std::uint64_t seed = 1;
  bool timing = false;
};

Json ReproduceCommand(const ReproduceArgs& args, const std::vector<std::string>& argv,
                      std::string& text, bool& all_pass) {
  for (int id : args.only) {
    if (id < 1 || id > kNumCriteria) throw ArgumentError("--only takes criteria 1-7");
  }
  if (args.paths < 1) throw ArgumentError("--paths must be at least 1");
  ReproductionOptions opts;
  opts.fixture_dir = args.fixtures;
  opts.only = args.only;
  opts.learning_paths = args.paths;
  opts.seed = args.seed;
  Json rows = Json::array();
  std::ostringstream out;
  all_pass = true;
  for (int id : args.only.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7} : args.only) {
    const auto report = RunCriterion(id, opts);
    all_pass = all_pass && report.pass;
    rows.push_back(CriterionToJson(report, args.timing));
    out << CriterionLine(report) << "\n";
    for (const auto& c : report.checks) {
      out << "    [" << (c.pass ? "ok" : "FAIL") << "] " << c.name;
      if (!c.detail.empty()) out << " (" << c.detail << ")";
      out << "\n";
    }
    std::cout.flush();
  }
  const Json provenance = Provenance(args.seed, Json{{"exact", "rational equality"},
                                                     {"special_functions", 1e-12},
                                                     {"limit_probability", 1e-6},
                                                     {"nash_gap", "1/1000000000"}});
  out << "provenance: " << provenance["tool"].get<std::string>() << ", seed " << args.seed
      << ", fixtures " << args.fixtures;
  for (const auto& [name, version] : provenance["libraries"].items()) {
    out << ", " << name << " " << version.get<std::string>();
  }
  out << "\n" << (all_pass ? "all criteria PASS" : "some criteria FAIL") << "\n";
  text = out.str();
  Json config{{"fixtures", args.fixtures}, {"only", args.only}, {"paths", args.paths}};
  Json report = Report("reproduce", argv, config, Json{{"pass", all_pass}, {"criteria", rows}},
                       args.seed, provenance["tolerances"]);
  return report;
}

// ---------------------------------------------------------- export-fixtures

Json ExportCommand(const std::string& dir, const std::vector<std::string>& argv,
                   std::string& text) {
  std::filesystem::create_directories(dir);
  Json files = Json::array();
  std::ostringstream out;
  for (const auto& [name, doc] : StandardFixtures()) {
    const std::string path = (std::filesystem::path(dir) / name).string();
    std::ofstream file(path);
    if (!file) throw ArgumentError("cannot write " + path);
    file << SerializeGame(doc);
    files.push_back(name);
    out << "wrote " << path << "\n";
  }
  text = out.str();
  return Report("export-fixtures", argv, Json{{"dir", dir}}, Json{{"files", files}}, 0,
                Json::object());
}

int Run(int argc, char** argv) {
  CLI::App app{"Player-compatible equilibrium toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("pce ") + kToolVersion);
  Output output;
  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", output.out, "Write the JSON report to this path");
    cmd->add_flag("--json", output.json, "Print the JSON report instead of the summary");
  };

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Compatibility digraph of a game");
  c_analyze->add_option("file", analyze.file, "Game file")->required();
  c_analyze->add_flag("--reduce", analyze.reduce, "Remove strictly dominated strategies first");
  add_output(c_analyze);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve-pce", "Trace epsilon-PCE along a shrinking schedule");
  c_solve->add_option("file", solve.file, "Game file")->required();
  c_solve->add_flag("--reduce", solve.reduce, "Remove strictly dominated strategies first");
  c_solve->add_option("--base", solve.base, "Floor of sink strategies at step 0")->capture_default_str();
  c_solve->add_option("--decay", solve.decay, "Factor applied per step")->capture_default_str();
  c_solve->add_option("--ratio", solve.ratio, "Floor ratio per compatibility rank")->capture_default_str();
  c_solve->add_option("--steps", solve.steps)->capture_default_str();
  c_solve->add_option("--starts", solve.starts)->capture_default_str();
  c_solve->add_option("--seed", solve.seed)->capture_default_str();
  add_output(c_solve);

  ProfileArgs refute;
  auto* c_refute = app.add_subcommand("refute", "Search for evidence that a Nash profile is not a PCE");
  c_refute->add_option("file", refute.file, "Game file")->required();
  c_refute->add_flag("--reduce", refute.reduce, "Remove strictly dominated strategies first");
  c_refute->add_option("--pure", refute.pure, "One strategy label per player");
  c_refute->add_option("--mixed", refute.mixed, "JSON array of probability rows");
  c_refute->add_option("--samples", refute.samples)->capture_default_str();
  c_refute->add_option("--seed", refute.seed)->capture_default_str();
  add_output(c_refute);

  ProfileArgs criterion;
  auto* c_criterion = app.add_subcommand("criterion", "Compatibility criterion for a signaling equilibrium");
  c_criterion->add_option("file", criterion.file, "Signaling game file")->required();
  c_criterion->add_option("--pure", criterion.pure, "Signal per type, then the receiver plan");
  c_criterion->add_option("--mixed", criterion.mixed, "JSON array of probability rows");
  add_output(c_criterion);

  FactorArgs factor;
  auto* c_factor = app.add_subcommand("check-factorable", "Factorability analysis of an extensive game");
  c_factor->add_option("file", factor.file, "Extensive game file")->required();
  c_factor->add_option("--player", factor.players, "Player to analyze (repeatable)");
  c_factor->add_option("--pair", factor.pair, "Two players to test for an isomorphic factoring")
      ->expected(2);
  add_output(c_factor);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Coupled learning runs for two players");
  c_sim->add_option("file", sim.file, "Extensive game file")->required();
  c_sim->add_option("--policy", sim.policy, "ucb or opt")->capture_default_str();
  c_sim->add_option("--gamma", sim.gamma, "Survival probability")->capture_default_str();
  c_sim->add_option("--delta", sim.delta, "Patience (opt only)")->capture_default_str();
  c_sim->add_option("--quantile", sim.quantile, "'default' or a constant level (ucb only)")
      ->capture_default_str();
  c_sim->add_option("--prior", sim.prior, "Dirichlet count per action")->capture_default_str();
  c_sim->add_option("--paths", sim.paths)->capture_default_str();
  c_sim->add_option("--horizon", sim.horizon, "Periods per path (0: gamma^T <= 1e-9)")
      ->capture_default_str();
  c_sim->add_option("--seed", sim.seed)->capture_default_str();
  c_sim->add_option("--pair", sim.pair, "Players i and j")->expected(2)->required();
  c_sim->add_option("--strategy", sim.strategy, "Strategy of i to compare");
  add_output(c_sim);

  ReproduceArgs repro;
  auto* c_repro = app.add_subcommand("reproduce", "Run the acceptance criteria");
  c_repro->add_option("--only", repro.only, "Criterion numbers to run");
  c_repro->add_option("--fixtures", repro.fixtures, "Fixture directory")->capture_default_str();
  c_repro->add_option("--paths", repro.paths, "Coupled paths per learning configuration")
      ->capture_default_str();
  c_repro->add_option("--seed", repro.seed)->capture_default_str();
  c_repro->add_flag("--timing", repro.timing, "Include run times in the JSON report");
  add_output(c_repro);

  std::string export_dir = "fixtures";
  auto* c_export = app.add_subcommand("export-fixtures", "Write the built-in fixture library");
  c_export->add_option("--dir", export_dir)->capture_default_str();
  add_output(c_export);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }

  // The --out path is left out of the echo so that reports written to
  // different files compare equal.
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--out") {
      ++k;
    } else if (a.rfind("--out=", 0) != 0) {
      args.push_back(a);
    }
  }
  std::string text;
  Json report;
  int code = kExitOk;
  try {
    if (*c_analyze) {
      report = AnalyzeCommand(analyze, args, text);
    } else if (*c_solve) {
      report = SolveCommand(solve, args, text);
    } else if (*c_refute) {
      report = RefuteCommand(refute, args, text);
    } else if (*c_criterion) {
      report = CriterionCommand(criterion, args, text);
    } else if (*c_factor) {
      report = FactorCommand(factor, args, text);
    } else if (*c_sim) {
      report = SimulateCommand(sim, args, text);
    } else if (*c_repro) {
      bool pass = false;
      report = ReproduceCommand(repro, args, text, pass);
      if (!pass) code = kExitReproduction;
    } else if (*c_export) {
      report = ExportCommand(export_dir, args, text);
    }
    Emit(output, report, text);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kExitSchema;
  }
  return code;
}

}  // namespace
}  // namespace pce

int main(int argc, char** argv) {
  try {
    return pce::Run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
