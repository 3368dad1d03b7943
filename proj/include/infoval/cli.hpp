#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace infoval {

/// Everything one invocation needs; every report embeds it so re-runs are
/// reproducible byte for byte.
struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string mode = "float";  // "float" or "exact"
  std::size_t grid = 0;        // 0 picks the per-dimension default
  std::string out_dir = ".";
  std::uint64_t seed = 8211;
  std::vector<std::string> priors;  // comma-separated belief coordinates
  std::string suite = "all";        // verify: one suite name or "all"
};

/// Dispatch a command, writing report files under out_dir and a short
/// human-readable summary to out.  Returns the process exit code:
/// 0 success, 2 input error, 3 inapplicable construction, 4 numeric failure.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace infoval
