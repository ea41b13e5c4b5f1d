#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pileup::cli {

enum ExitCode : int
{
  success = 0,
  band_failure = 1,
  input_error = 2,
  numeric_failure = 3
};

//! Runs the command line (args excludes the program name) and returns the
//! process exit code. Diagnostics go to err, summaries to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pileup::cli
