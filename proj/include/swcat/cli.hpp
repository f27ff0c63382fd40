#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace swcat::cli {

/// Runs one subcommand. Summary counts go to `out` as `key=value` lines,
/// diagnostics to `err`. Returns 0 on success, 1 on input errors and usage
/// mistakes, 2 on internal errors. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swcat::cli
