#pragma once

#include <ostream>

namespace wwm {

/// Entry point of the command-line tool. Subcommands: simulate, analyze, geometry-check,
/// hm-check, goat-tracks, sweep. Returns 0 on success, 1 when a check suite fails (a JSON
/// failure report is printed) and 2 on usage or configuration errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wwm
