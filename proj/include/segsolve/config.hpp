#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segsolve/epsilon_solver.hpp"
#include "segsolve/grid.hpp"
#include "segsolve/problem.hpp"

namespace segsolve {

/// Run configuration.
///
///   [domain]   kind = interval | rectangle | disk
///              bounds = [a, b] | [xmin, xmax, ymin, ymax]    (interval, rectangle)
///              center = [x, y], radius = r                   (disk)
///              n = 201 | [nx, ny]
///   [system]   m, epsilon (default 1e-8), alpha = [..], A = [..]
///   [boundary.i]  piece = "<range>: <expr>"   (repeatable, first match wins)
///   [solver]   tol_linear, tol_fp, max_sweeps, linear = direct | cg
///
/// `A` entries are numbers or quoted expressions in x, y. `[coupling] A` and
/// `[exponents] alpha` are accepted as alternatives to the `[system]` keys.
/// Lines starting with '#' or ';' are comments.
struct SystemConfig {
  DomainSpec domain;
  int nx = 201;
  int ny = 201;
  std::size_t m = 0;
  double epsilon = 1e-8;
  std::vector<double> alpha;
  std::vector<std::string> weights;  // expression sources
  std::vector<BoundaryDatum> boundary;
  FixedPointOptions solver;

  std::string source_text;
  std::string source_name;
};

/// Parses config text; every schema problem is collected into one ConfigError.
SystemConfig parse_config_text(std::string_view text, std::string_view name = "<config>");
SystemConfig parse_config(const std::filesystem::path& path);

/// FNV-1a (64 bit) of the text with all whitespace removed, as 16 hex digits.
std::string config_hash(std::string_view text);
std::uint64_t fnv1a(std::string_view bytes);

/// The resolved configuration with every default filled in.
std::string canonical_config(const SystemConfig& config);

GridPtr build_grid(const SystemConfig& config);
CouplingWeights build_weights(const SystemConfig& config, const GridPtr& grid);

struct AssumptionReport {
  SegregationReport segregation;
  CouplingReport coupling;
  bool ok() const noexcept { return segregation.ok() && coupling.ok(); }
  std::vector<std::string> describe() const;
};

AssumptionReport check_assumptions(const SystemConfig& config, const Problem& problem);

/// Builds the problem; throws ConfigError (listing every violating node)
/// when the positivity, partial-segregation or coupling assumptions fail.
Problem build_problem(const SystemConfig& config);
/// As above but does not check the segregation or coupling assumptions.
Problem build_problem_unchecked(const SystemConfig& config);

}  // namespace segsolve
