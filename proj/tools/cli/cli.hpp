#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fuzzdss::cli {

// Process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;          // unknown command/flag, malformed argument
inline constexpr int exit_data = 2;           // unreadable file, bad model, bad input data
inline constexpr int exit_no_rule_fired = 3;  // eval: the inputs fall in a dead zone

/// Runs one command. `args` excludes the program name. Reads FUZZDSS_STORE
/// and FUZZDSS_LISTEN from the environment.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace fuzzdss::cli
