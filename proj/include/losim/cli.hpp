#pragma once

namespace losim {

// Full command-line front end. Returns the process exit code:
// 0 success, 1 runtime or verification failure, 2 usage error.
int runCli(int argc, const char* const* argv);

}  // namespace losim
