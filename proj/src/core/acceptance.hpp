#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace paircraft {

// One release-gate check. `detail` is a single line of the measured numbers
// so a failing run is diagnosable from the report alone.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double elapsed_s = 0.0;
  double limit_s = 0.0;
  std::string detail;
};

// Runs the full release gate against the bundled fixtures and calibrated
// models. Deterministic for a given seed; the default seed is the one the
// shipped report was produced with.
std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed = 20260822ull);

std::string format_acceptance_report(const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace paircraft
