#pragma once

// The fockgauge command line.  Every leaf command writes one table (CSV or JSON)
// and one manifest: {config, version, runtime_ms, notes[], summary}.
// The manifest goes to <out>.manifest.json, or to the error stream when the
// table goes to stdout.

#include <iosfwd>
#include <string>
#include <vector>

namespace fockgauge::cli {

/// Exit codes: 0 success, 1 precondition violated, 2 usage error.
int run(int argc, const char* const* argv);

/// args excludes the program name.  "-" output goes to out; messages to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fockgauge::cli
