#pragma once

#include <ostream>

namespace polyswitch {

/// Exit codes: 0 success, 1 domain failure, 2 usage or file error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyswitch
