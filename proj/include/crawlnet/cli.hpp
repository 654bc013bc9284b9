#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crawlnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Runs one CLI invocation. `args` excludes the program name. Results go to
// `out`, diagnostics to `err`. Non-convergence is reported, not an error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crawlnet
