#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oilcast::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPipeline = 2;

/// Runs the `oilcast` command line. `args` excludes the program name.
/// Returns 0 on success, 1 on a usage error, 2 when a pipeline step fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Tickers of a named symbol set ("study" is built in). Throws DataError for unknown names.
std::vector<std::string> symbol_set(const std::string& name);

}  // namespace oilcast::cli
