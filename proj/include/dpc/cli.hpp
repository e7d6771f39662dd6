#pragma once

// Command-line front end: analyze, simulate, count, benchmark, oracle.

#include <iosfwd>
#include <string>
#include <vector>

namespace dpc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoError = 2,
  kParseError = 3,
  kDimensionError = 4,
  kInvalidInput = 5,
  kBudgetExceeded = 6,
  kNumericalError = 7,
};

/// Output directory used when --out is not given.
inline constexpr const char* kOutputDirEnv = "DPC_OUTPUT_DIR";

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpc::cli
