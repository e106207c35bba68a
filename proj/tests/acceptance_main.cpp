#include <cstdio>

#include "core/acceptance.hpp"

int main() {
  auto results = paircraft::run_acceptance_suite();
  std::fputs(paircraft::format_acceptance_report(results).c_str(), stdout);
  return paircraft::all_passed(results) ? 0 : 1;
}
