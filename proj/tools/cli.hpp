#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treecross::cli {

inline constexpr const char* kVersion = "0.1.0";
/// Version of the CSV/JSON output layouts.
inline constexpr int kFormatVersion = 1;

enum ExitCode : int {
  kOk = 0,
  kBadConfig = 2,
  kGuardViolation = 3,
  kInternalError = 4,
};

/// Runs one invocation. `args` excludes the program name. Reports go to
/// `out` (or --out), machine-readable errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treecross::cli
