#ifndef QMT_CLI_HPP
#define QMT_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qmt {

/**
 * Runs the command-line interface. Exit codes: 0 success, 1 semantic failure
 * (unprovable goal, invalid certificate, failing law suite), 2 input error.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmt

#endif
