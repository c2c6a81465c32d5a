// Command-line driver. Exit status: 0 success, 1 computation error, 2 invalid
// configuration.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kglab::cli {

int run(int argc, const char* const* argv);
// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kglab::cli
