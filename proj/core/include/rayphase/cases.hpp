#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rayphase/acceptance.hpp"

namespace rayphase::cases {

using acceptance::CheckRow;

struct CaseResult {
  std::string id;
  std::vector<CheckRow> rows;
  bool pass = false;
};

struct CaseInfo {
  std::string id;
  std::string summary;      // one line
  std::string description;  // what is computed and what value is expected
};

std::vector<CaseInfo> list_cases();
const CaseInfo& describe(const std::string& id);  // throws on unknown id
CaseResult run_case(const std::string& id, std::uint64_t seed = 42);

std::string result_to_json(const CaseResult& r);
std::string format_report(const CaseResult& r);

}  // namespace rayphase::cases
