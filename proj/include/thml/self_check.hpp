#pragma once

#include <string>
#include <vector>

namespace thml {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Quick property suite behind `thml verify`: small-scale versions of the
/// oracle comparisons and invariants exercised by the test suites.
std::vector<CheckResult> run_self_checks();

}  // namespace thml
