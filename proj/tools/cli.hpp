#pragma once

#include <iosfwd>

namespace qai::cli {

enum ExitCode : int {
  kOk = 0,
  kBelowThreshold = 1,
  kUsage = 2,
  kInternal = 3,
};

/// Entry point behind the `qai` binary. Reports go to `out` (or --out),
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qai::cli
