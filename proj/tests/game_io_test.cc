#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pce/errors.h"
#include "pce/game_io.h"
#include "pce/reproduction.h"
#include "pce/standard_games.h"

namespace pce {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Path of the SchemaError thrown while parsing `text`, or "<none>".
std::string ErrorPath(const std::string& text) {
  try {
    ParseGameText(text);
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<none>";
}

const char* kSmallStrategic = R"({
  "kind": "strategic",
  "name": "pd",
  "players": ["a", "b"],
  "strategies": [["C", "D"], ["C", "D"]],
  "payoffs": [
    {"profile": ["C", "C"], "payoffs": [3, 3]},
    {"profile": ["C", "D"], "payoffs": [0, 4]},
    {"profile": ["D", "C"], "payoffs": ["4", "0"]},
    {"profile": ["D", "D"], "payoffs": ["1/1", 1]}
  ]
})";

TEST(GameIoTest, StandardFixturesRoundTrip) {
  for (const auto& [file, doc] : StandardFixtures()) {
    SCOPED_TRACE(file);
    const std::string text = SerializeGame(doc);
    const GameDocument back = ParseGameText(text);
    EXPECT_EQ(back.kind, doc.kind);
    EXPECT_EQ(back.name, doc.name);
    EXPECT_EQ(SerializeGame(back), text);
    EXPECT_EQ(StrategicFormOf(back).payoff_table(), StrategicFormOf(doc).payoff_table());
  }
}

TEST(GameIoTest, ShippedFixturesMatchExport) {
  for (const auto& [file, doc] : StandardFixtures()) {
    SCOPED_TRACE(file);
    const fs::path path = fs::path(PCE_FIXTURE_DIR) / file;
    ASSERT_TRUE(fs::exists(path));
    EXPECT_EQ(ReadFile(path), SerializeGame(doc));
  }
}

TEST(GameIoTest, RestaurantFixtureIsTheBuiltInGame) {
  const GameDocument doc = LoadGameFile(std::string(PCE_FIXTURE_DIR) + "/restaurant.json");
  ASSERT_TRUE(doc.strategic);
  EXPECT_EQ(doc.strategic->payoff_table(), RestaurantGame().payoff_table());
}

TEST(GameIoTest, NumbersAndStringsBothParse) {
  const GameDocument doc = ParseGameText(kSmallStrategic);
  ASSERT_TRUE(doc.strategic);
  EXPECT_EQ(doc.strategic->payoff(3, 0), Rational(1));
  EXPECT_EQ(doc.strategic->payoff(2, 0), Rational(4));
}

TEST(GameIoTest, DecimalNumbersAreExact) {
  std::string text = kSmallStrategic;
  text.replace(text.find("[3, 3]"), 6, "[0.1, 3]");
  const GameDocument doc = ParseGameText(text);
  EXPECT_EQ(doc.strategic->payoff(0, 0), Rational(1, 10));
}

TEST(GameIoTest, SchemaErrorsCarryPaths) {
  std::string text = kSmallStrategic;
  EXPECT_EQ(ErrorPath(text), "<none>");

  std::string missing_row = text;
  missing_row.erase(missing_row.find(",\n    {\"profile\": [\"D\", \"D\"]"),
                    std::string(",\n    {\"profile\": [\"D\", \"D\"], \"payoffs\": [\"1/1\", 1]}")
                        .size());
  EXPECT_EQ(ErrorPath(missing_row), "/payoffs");

  std::string bad_label = text;
  bad_label.replace(bad_label.find("[\"D\", \"C\"]"), 10, "[\"D\", \"X\"]");
  EXPECT_EQ(ErrorPath(bad_label), "/payoffs/2/profile/1");

  std::string unknown_key = text;
  unknown_key.replace(unknown_key.find("\"name\""), 6, "\"title\"");
  EXPECT_EQ(ErrorPath(unknown_key), "/title");

  std::string bad_version = text;
  bad_version.replace(bad_version.find("{"), 1, "{\"version\": 2,");
  EXPECT_EQ(ErrorPath(bad_version), "/version");

  std::string bad_kind = text;
  bad_kind.replace(bad_kind.find("strategic"), 9, "normal");
  EXPECT_EQ(ErrorPath(bad_kind), "/kind");

  std::string bad_rational = text;
  bad_rational.replace(bad_rational.find("\"1/1\""), 5, "\"1/0\"");
  EXPECT_EQ(ErrorPath(bad_rational), "/payoffs/3/payoffs/0");
}

TEST(GameIoTest, SyntaxErrorsReportLineAndColumn) {
  try {
    ParseGameText("{\n  \"kind\": \"strategic\",\n  oops\n}");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(GameIoTest, SignalingPriorIsValidated) {
  std::string text = SerializeGame(StandardFixtures()[6].second);
  ASSERT_NE(text.find("\"9/10\", \"1/10\""), std::string::npos);
  std::string bad = text;
  bad.replace(bad.find("\"9/10\", \"1/10\""), 14, "\"9/10\", \"2/10\"");
  EXPECT_EQ(ErrorPath(bad), "/prior");
  bad = text;
  bad.replace(bad.find("\"9/10\", \"1/10\""), 14, "\"1\", \"0\"");
  EXPECT_EQ(ErrorPath(bad), "/prior/1");
}

TEST(GameIoTest, ExtensiveStructureErrors) {
  const char* tree = R"({
    "kind": "extensive",
    "name": "t",
    "players": ["a", "b"],
    "infosets": [{"id": "h", "player": "a", "actions": ["x", "y"]}],
    "nodes": [
      {"id": "root", "nature": ["1/2", "1/2"], "children": ["d1", "d2"]},
      {"id": "d1", "infoset": "h", "children": ["t1", "t2"]},
      {"id": "d2", "infoset": "h", "children": ["t3", "t4"]},
      {"id": "t1", "payoffs": [1, 0]},
      {"id": "t2", "payoffs": [0, 1]},
      {"id": "t3", "payoffs": [2, 0]},
      {"id": "t4", "payoffs": [0, 2]}
    ]
  })";
  EXPECT_EQ(ErrorPath(tree), "<none>");
  const GameDocument doc = ParseGameText(tree);
  ASSERT_TRUE(doc.extensive);
  EXPECT_EQ(doc.extensive->num_strategies(0), 2);
  EXPECT_EQ(doc.extensive->node(0).owner, kNature);

  std::string bad_chance = tree;
  bad_chance.replace(bad_chance.find("[\"1/2\", \"1/2\"]"), 14, "[\"1/2\", \"1/3\"]");
  EXPECT_EQ(ErrorPath(bad_chance), "/nodes/0/nature");

  std::string root_child = tree;
  root_child.replace(root_child.find("[\"t3\", \"t4\"]"), 12, "[\"t3\", \"root\"]");
  EXPECT_EQ(ErrorPath(root_child), "/nodes/2/children/1");

  std::string dangling = tree;
  dangling.replace(dangling.find("[\"t3\", \"t4\"]"), 12, "[\"t3\", \"t9\"]");
  EXPECT_EQ(ErrorPath(dangling), "/nodes/2/children/1");

  // t4 is then unreachable: the structural check rejects the tree.
  std::string orphan = tree;
  orphan.replace(orphan.find("[\"t3\", \"t4\"]"), 12, "[\"t3\", \"t3\"]");
  EXPECT_EQ(ErrorPath(orphan), "/nodes");
}

TEST(GameIoTest, FormatJsonKeepsScalarArraysInline) {
  Json v = {{"a", {1, 2, 3}}, {"b", Json::array({Json{{"c", 1}}})}};
  EXPECT_EQ(FormatJson(v),
            "{\n  \"a\": [1, 2, 3],\n  \"b\": [\n    {\n      \"c\": 1\n    }\n  ]\n}\n");
}

// An edited fixture shows up as a failed acceptance row.
TEST(GameIoTest, TamperedFixtureFailsItsCriterion) {
  const fs::path dir = fs::temp_directory_path() / "pce_tampered_fixtures";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& [file, doc] : StandardFixtures()) {
    std::ofstream(dir / file) << SerializeGame(doc);
  }
  ReproductionOptions options;
  options.fixture_dir = dir.string();
  EXPECT_TRUE(RunCriterion(1, options).pass);

  std::string text = ReadFile(dir / "restaurant.json");
  const std::string row = "\"payoffs\": [\"3/2\", \"1/2\", \"9/2\"]";
  ASSERT_NE(text.find(row), std::string::npos);
  text.replace(text.find(row), row.size(), "\"payoffs\": [\"3/2\", \"1/2\", \"1/2\"]");
  std::ofstream(dir / "restaurant.json") << text;
  EXPECT_FALSE(RunCriterion(1, options).pass);

  fs::remove(dir / "restaurant.json");
  const CriterionReport missing = RunCriterion(1, options);
  EXPECT_FALSE(missing.pass);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace pce
