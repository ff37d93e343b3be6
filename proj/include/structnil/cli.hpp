#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace structnil {

/// Entry point of the structnil command line tool.  args[0] is the program
/// name.  JSON goes to `out` (or to --output), summaries to `err`.
/// Exit codes: 0 success, 1 usage or format error, 2 failed check or
/// mathematical error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace structnil
