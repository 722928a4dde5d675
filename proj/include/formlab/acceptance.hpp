#pragma once

#include <string>
#include <vector>

namespace formlab::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the full acceptance battery (ten criteria, fixed seeds and
/// tolerances) and returns one result per criterion.
std::vector<CriterionResult> runAll();

/// Prints one PASS/FAIL line per criterion to stdout; returns true when all
/// criteria pass.
bool printAndCheck(const std::vector<CriterionResult>& results);

}  // namespace formlab::acceptance
