#ifndef PCE_REPRODUCTION_H_
#define PCE_REPRODUCTION_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pce/game_io.h"

namespace pce {

// The shipped fixture library as (file name, document) pairs.
std::vector<std::pair<std::string, GameDocument>> StandardFixtures();

struct CriterionCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CriterionReport {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::vector<CriterionCheck> checks;
};

struct ReproductionOptions {
  // Directory holding the fixture files; every criterion reads its games
  // from there, so an edited fixture shows up as a failed row.
  std::string fixture_dir = "fixtures";
  std::vector<int> only;  // empty runs criteria 1-7
  int learning_paths = 10000;
  std::uint64_t seed = 1;
};

inline constexpr int kNumCriteria = 7;
inline constexpr const char* kToolVersion = "1.0.0";

// Tool and library versions plus the seed and any tolerances in force.
Json Provenance(std::uint64_t seed, const Json& tolerances);

// Runs one criterion. A run over its time limit fails. Exceptions thrown
// by a check (a missing fixture, say) fail that check and end the row.
CriterionReport RunCriterion(int id, const ReproductionOptions& options);
std::vector<CriterionReport> RunAcceptance(const ReproductionOptions& options);

Json CriterionToJson(const CriterionReport& report, bool with_timing);
// "criterion N  PASS|FAIL  title  (x.x s / limit s)".
std::string CriterionLine(const CriterionReport& report);

}  // namespace pce

#endif  // PCE_REPRODUCTION_H_
