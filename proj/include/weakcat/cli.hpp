#pragma once

namespace weakcat {

// Entry point for the `weakcat` command-line tool.  Returns the process exit
// code: 0 on success, 1 when diagnostics were reported or the requested
// post-selection is infeasible, 2 on usage errors (bad flags, missing files,
// malformed WEAKCAT_SEED).
int cli_main(int argc, const char* const* argv);

}  // namespace weakcat
