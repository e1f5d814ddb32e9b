#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sqwell::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 2;
inline constexpr int kRootLost = 3;
inline constexpr int kNumerical = 4;

/// args[0] is the program name. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqwell::cli
