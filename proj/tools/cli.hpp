#pragma once

#include <ostream>

namespace rangereach::cli {

/// Entry point of the `rangereach` command line tool. Subcommands: build,
/// query, bench, verify, gen-graph, gen-workload. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rangereach::cli
