#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmt::cli {

// Exit codes: 0 success, 2 invalid input, 3 numerical failure.
int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

} // namespace rmt::cli
