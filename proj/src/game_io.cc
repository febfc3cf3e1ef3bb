#include "pce/game_io.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pce/errors.h"

namespace pce {
namespace {

std::string Escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string At(const std::string& base, const std::string& key) { return base + "/" + Escape(key); }
std::string At(const std::string& base, size_t index) { return base + "/" + std::to_string(index); }

void ExpectObject(const Json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, "expected an object");
}

void ExpectArray(const Json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
}

void CheckKeys(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw SchemaError(At(path, key), "unknown key");
  }
}

const Json& Require(const Json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(At(path, key), "missing required key");
  return *it;
}

std::string ReadString(const Json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  std::string s = v.get<std::string>();
  if (s.empty()) throw SchemaError(path, "empty string");
  return s;
}

std::vector<std::string> ReadNames(const Json& v, const std::string& path) {
  ExpectArray(v, path);
  if (v.empty()) throw SchemaError(path, "expected a nonempty list");
  std::vector<std::string> names;
  for (size_t k = 0; k < v.size(); ++k) {
    std::string name = ReadString(v[k], At(path, k));
    for (const auto& seen : names) {
      if (seen == name) throw SchemaError(At(path, k), "duplicate name '" + name + "'");
    }
    names.push_back(std::move(name));
  }
  return names;
}

Rational ReadRational(const Json& v, const std::string& path) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number()) {
    text = v.dump();
  } else {
    throw SchemaError(path, "expected a number or a \"p/q\" string");
  }
  try {
    return ParseRational(text);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(path, std::string("bad rational: ") + e.what());
  }
}

RationalVector ReadRationals(const Json& v, const std::string& path, size_t expected) {
  ExpectArray(v, path);
  if (v.size() != expected) {
    throw SchemaError(path, "expected " + std::to_string(expected) + " entries, got " +
                                std::to_string(v.size()));
  }
  RationalVector out;
  for (size_t k = 0; k < v.size(); ++k) out.push_back(ReadRational(v[k], At(path, k)));
  return out;
}

RationalVector ReadDistribution(const Json& v, const std::string& path, size_t expected,
                                bool positive) {
  RationalVector p = ReadRationals(v, path, expected);
  Rational total = 0;
  for (size_t k = 0; k < p.size(); ++k) {
    if (p[k] < 0 || (positive && p[k] == 0)) {
      throw SchemaError(At(path, k), positive ? "probability must be positive"
                                              : "probability must be nonnegative");
    }
    total += p[k];
  }
  if (total != 1) throw SchemaError(path, "probabilities sum to " + ToString(total));
  return p;
}

int IndexOf(const std::vector<std::string>& names, const std::string& name) {
  for (size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return static_cast<int>(k);
  }
  return -1;
}

int ReadLabel(const Json& v, const std::string& path, const std::vector<std::string>& names,
              const std::string& what) {
  const std::string label = ReadString(v, path);
  const int k = IndexOf(names, label);
  if (k < 0) throw SchemaError(path, "unknown " + what + " '" + label + "'");
  return k;
}

StrategicGame ParseStrategic(const Json& doc) {
  CheckKeys(doc, "", {"version", "kind", "name", "notes", "players", "strategies", "payoffs"});
  const auto players = ReadNames(Require(doc, "", "players"), "/players");
  const Json& strat = Require(doc, "", "strategies");
  ExpectArray(strat, "/strategies");
  if (strat.size() != players.size()) {
    throw SchemaError("/strategies", "expected one strategy list per player");
  }
  std::vector<std::vector<std::string>> strategies;
  int num_profiles = 1;
  for (size_t i = 0; i < strat.size(); ++i) {
    strategies.push_back(ReadNames(strat[i], At("/strategies", i)));
    if (strategies.back().size() < 2) {
      throw SchemaError(At("/strategies", i), "a player needs at least two strategies");
    }
    num_profiles *= static_cast<int>(strategies.back().size());
  }
  const Json& table = Require(doc, "", "payoffs");
  ExpectArray(table, "/payoffs");
  std::vector<RationalVector> payoffs(num_profiles);
  std::vector<bool> seen(num_profiles, false);
  for (size_t r = 0; r < table.size(); ++r) {
    const std::string row = At("/payoffs", r);
    ExpectObject(table[r], row);
    CheckKeys(table[r], row, {"profile", "payoffs"});
    const Json& labels = Require(table[r], row, "profile");
    ExpectArray(labels, At(row, "profile"));
    if (labels.size() != players.size()) {
      throw SchemaError(At(row, "profile"), "expected one strategy per player");
    }
    int index = 0;
    for (size_t i = 0; i < players.size(); ++i) {
      index = index * static_cast<int>(strategies[i].size()) +
              ReadLabel(labels[i], At(At(row, "profile"), i), strategies[i],
                        "strategy of " + players[i]);
    }
    if (seen[index]) throw SchemaError(At(row, "profile"), "profile listed twice");
    seen[index] = true;
    payoffs[index] = ReadRationals(Require(table[r], row, "payoffs"), At(row, "payoffs"),
                                   players.size());
  }
  for (int p = 0; p < num_profiles; ++p) {
    if (seen[p]) continue;
    std::string missing;
    int rest = p;
    std::vector<std::string> labels(players.size());
    for (int i = static_cast<int>(players.size()) - 1; i >= 0; --i) {
      labels[i] = strategies[i][rest % strategies[i].size()];
      rest /= static_cast<int>(strategies[i].size());
    }
    for (const auto& l : labels) missing += (missing.empty() ? "" : ", ") + l;
    throw SchemaError("/payoffs", "table is not total: no row for (" + missing + ")");
  }
  return StrategicGame(players, strategies, payoffs);
}

ExtensiveGame ParseExtensive(const Json& doc) {
  CheckKeys(doc, "",
            {"version", "kind", "name", "notes", "players", "infosets", "nodes", "environment"});
  const auto players = ReadNames(Require(doc, "", "players"), "/players");
  const Json& sets = Require(doc, "", "infosets");
  ExpectArray(sets, "/infosets");
  std::vector<InfoSet> infosets;
  std::vector<std::string> set_ids;
  for (size_t h = 0; h < sets.size(); ++h) {
    const std::string path = At("/infosets", h);
    ExpectObject(sets[h], path);
    CheckKeys(sets[h], path, {"id", "player", "actions"});
    InfoSet info;
    info.id = ReadString(Require(sets[h], path, "id"), At(path, "id"));
    if (IndexOf(set_ids, info.id) >= 0) {
      throw SchemaError(At(path, "id"), "duplicate information set '" + info.id + "'");
    }
    info.player = ReadLabel(Require(sets[h], path, "player"), At(path, "player"), players, "player");
    info.actions = ReadNames(Require(sets[h], path, "actions"), At(path, "actions"));
    set_ids.push_back(info.id);
    infosets.push_back(std::move(info));
  }

  const Json& list = Require(doc, "", "nodes");
  ExpectArray(list, "/nodes");
  if (list.empty()) throw SchemaError("/nodes", "expected a nonempty list");
  std::map<std::string, int> node_index;
  for (size_t v = 0; v < list.size(); ++v) {
    const std::string path = At("/nodes", v);
    ExpectObject(list[v], path);
    const std::string id = ReadString(Require(list[v], path, "id"), At(path, "id"));
    if (!node_index.emplace(id, static_cast<int>(v)).second) {
      throw SchemaError(At(path, "id"), "duplicate node '" + id + "'");
    }
  }
  std::vector<ExtensiveNode> nodes(list.size());
  for (size_t v = 0; v < list.size(); ++v) {
    const std::string path = At("/nodes", v);
    const Json& item = list[v];
    ExtensiveNode& node = nodes[v];
    node.id = item["id"].get<std::string>();
    const int shapes = item.contains("infoset") + item.contains("nature") + item.contains("payoffs");
    if (shapes != 1) {
      throw SchemaError(path, "a node needs exactly one of \"infoset\", \"nature\", \"payoffs\"");
    }
    if (item.contains("payoffs")) {
      CheckKeys(item, path, {"id", "payoffs"});
      node.owner = kTerminal;
      node.payoffs = ReadRationals(item["payoffs"], At(path, "payoffs"), players.size());
      continue;
    }
    CheckKeys(item, path, {"id", "infoset", "nature", "children"});
    size_t expected = 0;
    if (item.contains("infoset")) {
      node.infoset = ReadLabel(item["infoset"], At(path, "infoset"), set_ids, "information set");
      node.owner = infosets[node.infoset].player;
      infosets[node.infoset].nodes.push_back(static_cast<int>(v));
      expected = infosets[node.infoset].actions.size();
    } else {
      node.owner = kNature;
      const Json& probs = item["nature"];
      ExpectArray(probs, At(path, "nature"));
      expected = probs.size();
      if (expected == 0) throw SchemaError(At(path, "nature"), "expected a nonempty list");
      node.chance = ReadDistribution(probs, At(path, "nature"), expected, true);
    }
    const std::string cpath = At(path, "children");
    const Json& children = Require(item, path, "children");
    ExpectArray(children, cpath);
    if (children.size() != expected) {
      throw SchemaError(cpath, "expected " + std::to_string(expected) + " children");
    }
    for (size_t k = 0; k < children.size(); ++k) {
      const std::string child = ReadString(children[k], At(cpath, k));
      auto it = node_index.find(child);
      if (it == node_index.end()) throw SchemaError(At(cpath, k), "unknown node '" + child + "'");
      if (it->second == 0) throw SchemaError(At(cpath, k), "the root cannot be a child");
      node.children.push_back(it->second);
    }
  }
  for (size_t h = 0; h < infosets.size(); ++h) {
    if (infosets[h].nodes.empty()) throw SchemaError(At("/infosets", h), "no node uses this set");
  }
  try {
    return ExtensiveGame(players, std::move(nodes), std::move(infosets));
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/nodes", e.what());
  }
}

MixedProfile ParseEnvironment(const Json& v, const ExtensiveGame& game) {
  const std::string path = "/environment";
  ExpectObject(v, path);
  std::set<std::string> names(game.players().begin(), game.players().end());
  CheckKeys(v, path, names);
  MixedProfile profile;
  for (int i = 0; i < game.num_players(); ++i) {
    profile.push_back(ReadDistribution(Require(v, path, game.player(i)), At(path, game.player(i)),
                                       game.num_strategies(i), false));
  }
  return profile;
}

// table[type][signal][action] from nested objects keyed by label.
std::vector<std::vector<RationalVector>> ParsePayoffTable(const Json& v, const std::string& path,
                                                          const SignalingGame& sg) {
  ExpectObject(v, path);
  CheckKeys(v, path, std::set<std::string>(sg.types.begin(), sg.types.end()));
  std::vector<std::vector<RationalVector>> table;
  for (const auto& type : sg.types) {
    const std::string tpath = At(path, type);
    const Json& by_signal = Require(v, path, type);
    ExpectObject(by_signal, tpath);
    CheckKeys(by_signal, tpath, std::set<std::string>(sg.signals.begin(), sg.signals.end()));
    std::vector<RationalVector> rows;
    for (const auto& signal : sg.signals) {
      const std::string spath = At(tpath, signal);
      const Json& by_action = Require(by_signal, tpath, signal);
      ExpectObject(by_action, spath);
      CheckKeys(by_action, spath, std::set<std::string>(sg.actions.begin(), sg.actions.end()));
      RationalVector row;
      for (const auto& action : sg.actions) {
        row.push_back(ReadRational(Require(by_action, spath, action), At(spath, action)));
      }
      rows.push_back(std::move(row));
    }
    table.push_back(std::move(rows));
  }
  return table;
}

SignalingGame ParseSignaling(const Json& doc) {
  CheckKeys(doc, "", {"version", "kind", "name", "notes", "types", "prior", "signals", "actions",
                      "receiver", "sender_payoffs", "receiver_payoffs"});
  SignalingGame sg;
  sg.types = ReadNames(Require(doc, "", "types"), "/types");
  sg.prior = ReadDistribution(Require(doc, "", "prior"), "/prior", sg.types.size(), true);
  sg.signals = ReadNames(Require(doc, "", "signals"), "/signals");
  sg.actions = ReadNames(Require(doc, "", "actions"), "/actions");
  if (doc.contains("receiver")) sg.receiver_name = ReadString(doc["receiver"], "/receiver");
  if (IndexOf(sg.types, sg.receiver_name) >= 0) {
    throw SchemaError("/receiver", "receiver name collides with a type");
  }
  sg.sender_payoff = ParsePayoffTable(Require(doc, "", "sender_payoffs"), "/sender_payoffs", sg);
  sg.receiver_payoff =
      ParsePayoffTable(Require(doc, "", "receiver_payoffs"), "/receiver_payoffs", sg);
  return sg;
}

Json Names(const std::vector<std::string>& names) {
  Json out = Json::array();
  for (const auto& n : names) out.push_back(n);
  return out;
}

Json Rationals(const RationalVector& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(RationalToJson(v));
  return out;
}

void WriteStrategic(const StrategicGame& g, Json& out) {
  out["players"] = Names(g.players());
  Json strategies = Json::array();
  for (int i = 0; i < g.num_players(); ++i) strategies.push_back(Names(g.strategies(i)));
  out["strategies"] = strategies;
  Json table = Json::array();
  for (int p = 0; p < g.num_profiles(); ++p) {
    Json labels = Json::array();
    for (int i = 0; i < g.num_players(); ++i) labels.push_back(g.strategies(i)[g.StrategyAt(p, i)]);
    table.push_back(Json{{"profile", labels}, {"payoffs", Rationals(g.payoff_table()[p])}});
  }
  out["payoffs"] = table;
}

void WriteExtensive(const ExtensiveGame& g, Json& out) {
  out["players"] = Names(g.players());
  Json sets = Json::array();
  for (const auto& h : g.infosets()) {
    sets.push_back(Json{{"id", h.id}, {"player", g.player(h.player)}, {"actions", Names(h.actions)}});
  }
  out["infosets"] = sets;
  Json nodes = Json::array();
  for (const auto& node : g.nodes()) {
    Json item{{"id", node.id}};
    if (node.owner == kTerminal) {
      item["payoffs"] = Rationals(node.payoffs);
    } else {
      if (node.owner == kNature) {
        item["nature"] = Rationals(node.chance);
      } else {
        item["infoset"] = g.infoset(node.infoset).id;
      }
      Json children = Json::array();
      for (int c : node.children) children.push_back(g.node(c).id);
      item["children"] = children;
    }
    nodes.push_back(item);
  }
  out["nodes"] = nodes;
}

void WriteSignaling(const SignalingGame& sg, Json& out) {
  out["types"] = Names(sg.types);
  out["prior"] = Rationals(sg.prior);
  out["signals"] = Names(sg.signals);
  out["actions"] = Names(sg.actions);
  out["receiver"] = sg.receiver_name;
  for (const auto& [key, table] : {std::pair{"sender_payoffs", &sg.sender_payoff},
                                   std::pair{"receiver_payoffs", &sg.receiver_payoff}}) {
    Json by_type = Json::object();
    for (int t = 0; t < sg.num_types(); ++t) {
      Json by_signal = Json::object();
      for (int s = 0; s < sg.num_signals(); ++s) {
        Json by_action = Json::object();
        for (int a = 0; a < sg.num_actions(); ++a) {
          by_action[sg.actions[a]] = RationalToJson((*table)[t][s][a]);
        }
        by_signal[sg.signals[s]] = by_action;
      }
      by_type[sg.types[t]] = by_signal;
    }
    out[key] = by_type;
  }
}

}  // namespace

std::string KindName(GameKind kind) {
  switch (kind) {
    case GameKind::kStrategic:
      return "strategic";
    case GameKind::kExtensive:
      return "extensive";
    case GameKind::kSignaling:
      return "signaling";
  }
  return "";
}

GameDocument GameFromJson(const Json& document) {
  ExpectObject(document, "");
  if (document.contains("version")) {
    const Json& v = document["version"];
    if (!v.is_number_integer() || v.get<int>() != kGameFormatVersion) {
      throw SchemaError("/version", "unsupported format version");
    }
  }
  GameDocument doc;
  const std::string kind = ReadString(Require(document, "", "kind"), "/kind");
  if (document.contains("name")) doc.name = ReadString(document["name"], "/name");
  if (document.contains("notes")) doc.notes = ReadString(document["notes"], "/notes");
  if (kind == "strategic") {
    doc.kind = GameKind::kStrategic;
    doc.strategic = ParseStrategic(document);
  } else if (kind == "extensive") {
    doc.kind = GameKind::kExtensive;
    doc.extensive = ParseExtensive(document);
    if (document.contains("environment")) {
      doc.environment = ParseEnvironment(document["environment"], *doc.extensive);
    }
  } else if (kind == "signaling") {
    doc.kind = GameKind::kSignaling;
    doc.signaling = ParseSignaling(document);
  } else {
    throw SchemaError("/kind", "expected strategic, extensive or signaling");
  }
  return doc;
}

GameDocument ParseGameText(std::string_view text) {
  Json document;
  try {
    document = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    int line = 1, column = 1;
    for (size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SchemaError("", "line " + std::to_string(line) + ", column " + std::to_string(column) +
                              ": invalid JSON");
  }
  return GameFromJson(document);
}

GameDocument LoadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("", "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseGameText(buffer.str());
}

Json GameToJson(const GameDocument& document) {
  Json out;
  out["version"] = kGameFormatVersion;
  out["kind"] = KindName(document.kind);
  if (!document.name.empty()) out["name"] = document.name;
  if (!document.notes.empty()) out["notes"] = document.notes;
  switch (document.kind) {
    case GameKind::kStrategic:
      WriteStrategic(document.strategic.value(), out);
      break;
    case GameKind::kExtensive: {
      const ExtensiveGame& g = document.extensive.value();
      WriteExtensive(g, out);
      if (document.environment) {
        Json env = Json::object();
        for (int i = 0; i < g.num_players(); ++i) {
          env[g.player(i)] = Rationals(document.environment->at(i));
        }
        out["environment"] = env;
      }
      break;
    }
    case GameKind::kSignaling:
      WriteSignaling(document.signaling.value(), out);
      break;
  }
  return out;
}

namespace {

void Format(const Json& v, int indent, std::string& out) {
  const std::string pad(indent + 2, ' ');
  if (v.is_object() && !v.empty()) {
    out += "{\n";
    bool first = true;
    for (const auto& [key, item] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(key).dump() + ": ";
      Format(item, indent + 2, out);
    }
    out += "\n" + std::string(indent, ' ') + "}";
  } else if (v.is_array() && !v.empty() &&
             std::any_of(v.begin(), v.end(), [](const Json& e) { return e.is_structured(); })) {
    out += "[\n";
    for (size_t k = 0; k < v.size(); ++k) {
      if (k > 0) out += ",\n";
      out += pad;
      Format(v[k], indent + 2, out);
    }
    out += "\n" + std::string(indent, ' ') + "]";
  } else if (v.is_array()) {
    out += "[";
    for (size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + v[k].dump();
    out += "]";
  } else {
    out += v.dump();
  }
}

}  // namespace

std::string FormatJson(const Json& value) {
  std::string out;
  Format(value, 0, out);
  return out + "\n";
}

std::string SerializeGame(const GameDocument& document) { return FormatJson(GameToJson(document)); }

GameDocument MakeDocument(std::string name, StrategicGame game) {
  GameDocument doc;
  doc.kind = GameKind::kStrategic;
  doc.name = std::move(name);
  doc.strategic = std::move(game);
  return doc;
}

GameDocument MakeDocument(std::string name, ExtensiveGame game) {
  GameDocument doc;
  doc.kind = GameKind::kExtensive;
  doc.name = std::move(name);
  doc.extensive = std::move(game);
  return doc;
}

GameDocument MakeDocument(std::string name, SignalingGame game) {
  GameDocument doc;
  doc.kind = GameKind::kSignaling;
  doc.name = std::move(name);
  doc.signaling = std::move(game);
  return doc;
}

StrategicGame StrategicFormOf(const GameDocument& document) {
  switch (document.kind) {
    case GameKind::kStrategic:
      return document.strategic.value();
    case GameKind::kExtensive:
      return ReduceToStrategic(document.extensive.value());
    case GameKind::kSignaling:
      return SignalingToStrategic(document.signaling.value());
  }
  throw std::logic_error("unknown game kind");
}

Json RationalToJson(const Rational& value) { return ToString(value); }

Json MixedToJson(const MixedProfile& profile) {
  Json out = Json::array();
  for (const auto& row : profile) out.push_back(Rationals(row));
  return out;
}

}  // namespace pce
