#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rayphase::acceptance {

struct CheckRow {
  std::string name;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string tag;
  std::string title;
  std::vector<CheckRow> rows;
  bool pass = false;
  double seconds = 0.0;
};

int criterion_count();

/// Runs one criterion (1-based id). Randomized pieces derive their generator
/// from the seed, so reports are reproducible.
CriterionResult run_criterion(int id, std::uint64_t seed = 42);

/// Runs every criterion whose tag or title contains `filter` (empty = all),
/// with up to `jobs` running concurrently. Results come back ordered by id.
std::vector<CriterionResult> run_all(const std::string& filter = "",
                                     std::uint64_t seed = 42, int jobs = 1);

/// One line per check: "criterion | check | expected computed tolerance
/// status", then a summary line.
std::string format_table(const std::vector<CriterionResult>& results);

std::string results_to_json(const std::vector<CriterionResult>& results,
                            std::uint64_t seed);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace rayphase::acceptance
