#pragma once

#include <iosfwd>

namespace lucent {

// Exit codes of the command line tool.
enum ExitCode : int {
	exit_ok = 0,
	exit_violation = 1,
	exit_usage = 2,
	exit_indeterminate = 3,
};

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace lucent
