#pragma once

#include <ostream>

namespace oraclebench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point of the `oraclebench` tool. Never throws; returns the exit code.
///
///   oraclebench experiment --config PATH --out DIR [--set k=v]... [--workers N]
///   oraclebench compute QUANTITY [options]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oraclebench
