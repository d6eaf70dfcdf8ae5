#pragma once

#include <iosfwd>

namespace sandpile {

enum ExitCode : int
{
  kExitOk = 0,
  kExitPropertyFalse = 1,
  kExitUsage = 2,
  kExitCrossCheck = 3,
};

/// The `sandpile` command line. Reports go to out, diagnostics to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, const char* const* argv);

} // namespace sandpile
