#pragma once

#include <string>
#include <vector>

namespace gl3m {

// Exit codes of the command-line front end.
enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitFalsified = 2 };

// args excludes the program name. Flags also read GL3M_<FLAG> from the environment.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace gl3m
