#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace segsolve {

/// Malformed or inadmissible input: bad config, degenerate domain, data that
/// violates the positivity / segregation assumptions.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message), problems_{message} {}
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "\n";
      out += item;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

/// A numerical stage failed to reach its tolerance.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace segsolve
