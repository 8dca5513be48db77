#pragma once

#include <string>
#include <vector>

namespace boundopt {

// One elementary check inside the acceptance suite. A criterion usually
// expands to several of these (one per run or per sub-property).
struct CheckResult {
  int criterion = 0;  // 1..kCriterionCount
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

inline constexpr int kCriterionCount = 12;

// Suites group criteria for the CLI: theorem1 covers the adversarial
// non-convergence trio (criteria 1-3), theorem3 the stochastic drift (4),
// lemma2/lemma1 the property suites (5, 6), regret-bound the bound
// containment (7), equivalence (8), gradient-oracle (9), schedule (10),
// lr-evolution (11), determinism (12).
const std::vector<std::string>& verify_suite_names();
const std::string& suite_for_criterion(int criterion);

std::vector<CheckResult> run_criterion(int criterion);
std::vector<CheckResult> run_suite(const std::string& suite);
std::vector<CheckResult> run_all_criteria();

bool all_passed(const std::vector<CheckResult>& results);
bool criterion_passed(const std::vector<CheckResult>& results, int criterion);

}  // namespace boundopt
