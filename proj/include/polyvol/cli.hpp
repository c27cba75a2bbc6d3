#pragma once

#include <functional>
#include <iosfwd>

namespace polyvol {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSchedule = 3;

/// Number of worker threads for `jobs` independent tasks: the hardware
/// concurrency, capped by POLYVOL_THREADS when set.
int worker_count(int jobs);

/// Runs fn(0) .. fn(n - 1) on worker_count(n) threads.
void parallel_for(int n, const std::function<void(int)>& fn);

/// Entry point of the polyvol tool; subcommands volume, generate, reduce, bench.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace polyvol
