#pragma once

namespace olda {

// Entry point behind the olda binary. Returns the process exit code:
// 0 success, 2 usage error, 1 runtime error.
int run_cli(int argc, const char* const* argv);

}  // namespace olda
