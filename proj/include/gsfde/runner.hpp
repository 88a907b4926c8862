#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsfde/bounds.hpp"
#include "gsfde/config.hpp"

namespace gsfde {

/// Process exit codes of the command-line runner.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitDivergence = 3,
  kExitCheckFailed = 4,
};

struct RunOptions {
  std::string subcommand;
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

/// Executes one subcommand (simulate, picard, verify, bdg, exp-estimate),
/// writes its artifacts and returns the exit code. Diagnostics go to `log`.
int run(const RunOptions& options, std::ostream& log);

/// The reports `verify` produces for a parsed config.
std::vector<BoundReport> run_verify(const ExperimentConfig& cfg);

}  // namespace gsfde
