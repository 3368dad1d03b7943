#pragma once

#include "infoval/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace infoval {

/// Outcome of one seeded property suite.
struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  bool pass = false;
  Json details;
};

/// Names of all property suites, in reporting order.
const std::vector<std::string>& suite_names();

/// Run one suite by name with the given seed. Unknown names raise input_error.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

/// Canonical JSON document for a suite result.
Json suite_report(const SuiteResult& r);

}  // namespace infoval
