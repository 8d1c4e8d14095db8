#pragma once

#include <iosfwd>

namespace fairsplit {

// Exit codes: 0 fair over the covered space, 1 bias found, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fairsplit
