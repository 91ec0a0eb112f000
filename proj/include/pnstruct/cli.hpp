#pragma once

#include <string>
#include <vector>

namespace pnstruct {

/// Outcome of one command-line invocation with captured streams, so tests
/// can drive the tool in-process.
struct CliResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

/// Runs one invocation (arguments without the program name).  Never
/// throws.  Exit codes: 0 success or property holds, 1 property fails
/// (witness printed), 2 usage or input error, 3 a resource limit cut the
/// analysis short of a verdict.
CliResult run(const std::vector<std::string>& args);

/// Same, wired to the real stdout/stderr; returns the exit code.
int run_main(int argc, char** argv);

}  // namespace pnstruct
