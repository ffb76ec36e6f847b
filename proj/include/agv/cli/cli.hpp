#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agv::cli {

/// Runs one `agv` command; `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`. Returns the process exit code:
/// 0 passed, 1 a check failed, 2 usage or load error, 3 undecided.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agv::cli
