#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shadercanny::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

/// Runs one command (detect, bench, compare, offload, dump). `args` excludes
/// the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shadercanny::cli
