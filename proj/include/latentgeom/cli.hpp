#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace latentgeom::cli {

/// Runs the command line `args` (without the program name). Results go to files named
/// by the flags or to `out`; diagnostics go to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace latentgeom::cli
