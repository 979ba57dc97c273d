// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. The same checks back the CLI `check` subcommand.

#include <iostream>

#include "stancesim/acceptance.hpp"

int main() {
  const auto results = stancesim::acceptance::run_all();
  stancesim::acceptance::print_results(std::cout, results);
  return stancesim::acceptance::all_passed(results) ? 0 : 1;
}
