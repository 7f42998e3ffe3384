#pragma once

#include <iosfwd>

namespace causal::cli
{

enum ExitCode : int
{
    exit_success = 0,
    exit_partial = 1, ///< finished, but some pairs, measures or windows failed
    exit_fatal = 2,   ///< usage error, unreadable input or a failure that stops the run
};

/// Entry point of the command-line tool; returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace causal::cli
