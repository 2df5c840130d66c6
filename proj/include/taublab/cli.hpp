#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace taublab::cli {

/// Exit codes.
inline constexpr int kPass = 0;
inline constexpr int kVerifyFail = 1;
inline constexpr int kParseError = 2;
inline constexpr int kDomainError = 3;

/// Runs the command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace taublab::cli
