#pragma once

namespace argrank::cli {

// Entry point behind the `argrank` binary; also callable in-process from
// tests. Exit codes: 0 success, 1 validation/config error, 2 judge or
// transport failure, 3 I/O failure.
int run(int argc, const char* const* argv);

}  // namespace argrank::cli
