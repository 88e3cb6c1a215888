#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace midec {

/// Entry point of the midec command line tool. `args` excludes the program
/// name. Returns 0 on success, 1 when an experiment records violations and
/// 2 for usage, config, or IO errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace midec
