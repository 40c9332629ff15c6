#ifndef SKEWBOOST_CLI_HPP
#define SKEWBOOST_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace skewboost {

// Dispatches a full command line (without argv[0]) to one of the tool's
// subcommands. Writes results to `out` and diagnostics to `err`; returns the
// intended process exit status.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace skewboost

#endif  // SKEWBOOST_CLI_HPP
