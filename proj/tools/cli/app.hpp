#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace freestate::cli {

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitInternal = 4;

// Whole command line (without argv[0]). Results go to out unless --out names
// a file; diagnostics go to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace freestate::cli
