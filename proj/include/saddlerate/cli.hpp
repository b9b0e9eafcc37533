#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace saddlerate {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitNoConvergence = 2, kExitInvariant = 3 };

// Runs one command line (without the program name). Results go to `out` in the
// selected format, diagnostics to `err`. With --out, the result, any raw data and
// a manifest.json that `replay` can re-execute are written to that directory.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace saddlerate
