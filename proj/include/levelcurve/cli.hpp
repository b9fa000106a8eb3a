#pragma once

namespace levelcurve::cli {

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 1 validation error, 2 I/O error.
int run(int argc, const char* const* argv);

} // namespace levelcurve::cli
