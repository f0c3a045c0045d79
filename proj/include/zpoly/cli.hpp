#pragma once
// The zpoly command line: loading inputs, dispatching subcommands and mapping
// outcomes to exit codes.

#include <iosfwd>

#include "zpoly/canon.hpp"
#include "zpoly/mso.hpp"

namespace zpoly {

enum ExitCode : int { kExitTrue = 0, kExitFalse = 1, kExitUncertain = 2, kExitInputError = 3 };

// A loaded function. The Cplc form is present for expressions without star
// and for first-order counting formulas; the representation is always there.
struct LoadedFunction {
  std::string source;  // file path or "<inline>"
  Alphabet alphabet;
  std::optional<Cplc> cplc;
  LinRep rep;
};

// An argument naming an existing file is read according to its extension
// (.zexpr, .zmso, .json); anything else is parsed as inline expression text.
LoadedFunction load_function(const std::string& arg);

// Runs one invocation. argv[0] is the program name.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace zpoly
