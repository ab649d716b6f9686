#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace etacheck::cli {

enum ExitCode { kPass = 0, kFail = 1, kUsage = 2, kContract = 3 };

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Cusp image tables, order lists and order tables for the level 20 case, byte-stable.
std::string render_tables();

}  // namespace etacheck::cli
