// Command-line front end. Exit codes: 0 success, 1 mathematical failure
// (exception or a residual over its threshold), 2 usage error.
#pragma once

#include <iosfwd>

namespace isospec::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isospec::cli
