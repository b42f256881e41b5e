#pragma once

#include <string>
#include <vector>

namespace ricci {

/// Entry point of the `ricci` executable, callable in-process by tests.
/// argv follows main() conventions (argv[0] is the program name).
/// Exit codes: 0 success, 1 runtime/data error, 2 usage error.
int run_cli(int argc, const char* const* argv);

/// Convenience overload; args exclude the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace ricci
