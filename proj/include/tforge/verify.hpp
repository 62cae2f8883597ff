#pragma once

#include <string>
#include <vector>

#include "tforge/torsion.hpp"

namespace tforge {

struct CheckResult {
  std::string name;
  bool pass;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_pass = true;
  double seconds = 0;
};

// cyclo, counts, eigen, inversion, tate, twist, jacobian, or all
std::vector<std::string> verify_suite_names();
SuiteResult run_verify_suite(const std::string& name, uint64_t budget = kDefaultBudget, int workers = 1,
                             uint64_t seed = 0);

}  // namespace tforge
