#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace segsolve::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kConfigFailure = 2,
  kSolverFailure = 3,
  kInternalFailure = 4,
};

struct RunOptions {
  std::string subcommand;  // validate, solve, limit, compare, rate, interfaces
  std::filesystem::path config;
  std::filesystem::path out_dir = "out";
  std::optional<double> epsilon;
  std::optional<int> n;
  std::size_t pivot = 1;  // 1-based
  std::optional<double> delta;
  int threads = 1;
  double start = 1e-2;
  double stop = 1e-6;
  std::size_t count = 5;
};

/// Runs one subcommand, writing outputs and `manifest.json` under
/// `out_dir`. Progress goes to `out`, diagnostics to `err`.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Command-line front end.
int main(int argc, char** argv);

}  // namespace segsolve::cli
