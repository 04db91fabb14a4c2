#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdmp::cli {

enum ExitCode : int
{
  exit_ok = 0,
  exit_config = 2,
  exit_numerical = 3,
  exit_io = 4
};

//! Runs the command line `pdmp <args...>` (args excludes the program name).
//! The summary goes to `out`, logs and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pdmp::cli
