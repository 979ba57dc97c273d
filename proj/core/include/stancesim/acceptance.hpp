#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "stancesim/scenario.hpp"

namespace stancesim::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

// Hook for injecting config overrides into every run a criterion makes
// (`check --config FILE`). Applied last, so injected values win.
using ConfigOverlay = std::function<RunConfig(const RunConfig&)>;

// Executes every acceptance criterion at its pinned tolerance.
std::vector<CriterionResult> run_all(const ConfigOverlay& overlay = {});

bool all_passed(const std::vector<CriterionResult>& results);

// One pass/fail line per criterion.
void print_results(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace stancesim::acceptance
