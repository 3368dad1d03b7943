#include "infoval/verify.hpp"

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

// Runs the full acceptance gate: one seeded property suite per criterion,
// then a determinism pass re-running every suite and requiring byte-identical
// reports.  Prints one line per criterion and exits with the failure count.

int main() {
  using namespace infoval;
  const std::uint64_t seed = 8211;
  const auto& names = suite_names();

  int failures = 0;
  std::vector<std::string> first_reports;
  first_reports.reserve(names.size());

  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto result = run_suite(names[i], seed);
    first_reports.push_back(dump_canonical(suite_report(result)));
    std::printf("criterion %02zu (%s): %s (%zu trials, %zu failures)\n", i + 1,
                names[i].c_str(), result.pass ? "PASS" : "FAIL", result.trials,
                result.failures);
    if (!result.pass) {
      ++failures;
      if (result.details.contains("first_failure"))
        std::printf("  %s\n",
                    result.details["first_failure"].get<std::string>().c_str());
    }
  }

  bool deterministic = true;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto again = dump_canonical(suite_report(run_suite(names[i], seed)));
    if (again != first_reports[i]) {
      deterministic = false;
      std::printf("  %s: re-run report differs\n", names[i].c_str());
    }
  }
  std::printf("criterion 13 (determinism): %s (%zu suites re-run)\n",
              deterministic ? "PASS" : "FAIL", names.size());
  if (!deterministic) ++failures;

  return failures;
}
