#pragma once

#include <atomic>
#include <iosfwd>
#include <string>
#include <vector>

namespace omegaforge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline constexpr int kSchemaVersion = 1;

/// Runs one command line (without the program name).  Reports go to `out`,
/// diagnostics to `err`.  `cancel`, when set, interrupts a running
/// exploration, which then saves a partial checkpoint.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel = nullptr);

}  // namespace omegaforge::cli
