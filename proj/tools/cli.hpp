#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace momentnet::cli {

/// Runs one subcommand. args[0] is the program name. Returns the process exit code:
/// 0 on success, 1 on usage or input errors, 2 when training aborted.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace momentnet::cli
