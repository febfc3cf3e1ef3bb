#ifndef PCE_GAME_IO_H_
#define PCE_GAME_IO_H_

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pce/extensive_game.h"
#include "pce/signaling_game.h"
#include "pce/strategic_game.h"

namespace pce {

using Json = nlohmann::ordered_json;

inline constexpr int kGameFormatVersion = 1;

enum class GameKind { kStrategic, kExtensive, kSignaling };

std::string KindName(GameKind kind);

// A parsed game file. Exactly one of the three game members is set,
// matching `kind`. `environment` is an optional mixed profile stored with
// extensive games (the opponents' play used by learning simulations).
struct GameDocument {
  GameKind kind = GameKind::kStrategic;
  std::string name;
  std::string notes;
  std::optional<StrategicGame> strategic;
  std::optional<ExtensiveGame> extensive;
  std::optional<SignalingGame> signaling;
  std::optional<MixedProfile> environment;
};

// All three throw SchemaError; the path is a JSON pointer to the offending
// value. Syntax errors carry the line and column instead.
GameDocument GameFromJson(const Json& document);
GameDocument ParseGameText(std::string_view text);
GameDocument LoadGameFile(const std::string& path);

Json GameToJson(const GameDocument& document);
// Two-space indented JSON with a trailing newline.
std::string SerializeGame(const GameDocument& document);

GameDocument MakeDocument(std::string name, StrategicGame game);
GameDocument MakeDocument(std::string name, ExtensiveGame game);
GameDocument MakeDocument(std::string name, SignalingGame game);

// Strategic form of any document: extensive games are reduced, signaling
// games go through SignalingToStrategic.
StrategicGame StrategicFormOf(const GameDocument& document);

// Two-space indentation; arrays of scalars stay on one line.
std::string FormatJson(const Json& value);

// Rationals are written as "p/q" strings. Accepted on input: such strings,
// decimal strings, and JSON numbers (converted from their decimal text).
Json RationalToJson(const Rational& value);
Json MixedToJson(const MixedProfile& profile);

}  // namespace pce

#endif  // PCE_GAME_IO_H_
