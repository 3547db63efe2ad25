#pragma once

namespace selfsim {

/// Command-line entry point (exposed for in-process testing).
/// Exit codes: 0 success/PASS, 1 usage or I/O error, 2 verification FAIL,
/// 3 numerical failure (message carries the failure category name).
int run_cli(int argc, const char* const* argv);

} // namespace selfsim
