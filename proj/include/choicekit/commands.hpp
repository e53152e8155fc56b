#pragma once

#include <ostream>

namespace choicekit {

/// The command line front end. Returns the process exit code: 0 pass,
/// 1 failed check or computation error, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace choicekit
