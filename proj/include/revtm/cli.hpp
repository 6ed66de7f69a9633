#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace revtm {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,       // bad arguments or unparsable input files
  kExitInvalid = 3,     // validation failures (conflicts, non-reversible, prefix violations)
  kExitNoWitness = 4,   // NoWitness records or Inconclusive tables
  kExitIo = 5,          // unreadable or unwritable files
};

/// Runs the command line; envelopes go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace revtm
