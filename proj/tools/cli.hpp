#pragma once

#include <iosfwd>

namespace cfsm::cli {

/// Runs the command line. Exit codes: 0 success or property holds, 1
/// property violated or not compatible/composable, 2 usage or input error.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

} // namespace cfsm::cli
