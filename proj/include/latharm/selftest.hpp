#pragma once

#include <string>
#include <vector>

namespace latharm {

/// Outcome of one check in the built-in verification suite.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured values against the pinned bounds
  double seconds = 0.0;
};

// Run the numbered verification suite with its tolerances pinned in code.
// Unless quiet, each criterion prints one [PASS]/[FAIL] line as it finishes.
std::vector<CriterionResult> run_selftest(bool quiet = false);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace latharm
