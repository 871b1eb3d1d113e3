#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace palab {

// Executes one command line (arguments without the program name) and writes
// the versioned report to `out`, diagnostics to `err`.
// Exit code: 0 decided/success, 2 verdict UNKNOWN or budget exhausted,
// 1 usage, input, or internal error.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

} // namespace palab
