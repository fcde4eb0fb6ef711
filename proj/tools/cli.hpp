#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eloc::cli {

// Exit codes: 0 success, 1 runtime/IO error, 2 configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eloc::cli
