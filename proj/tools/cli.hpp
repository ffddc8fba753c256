#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pinw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInvariant = 3;

/// Runs one `pinw` invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pinw::cli
