#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rarekit::cli {

// Runs one command line (args excludes the program name). Progress goes to
// `out`, diagnostics and usage errors to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rarekit::cli
