#pragma once

#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "segsolve/analysis.hpp"
#include "segsolve/config.hpp"
#include "segsolve/elliptic.hpp"
#include "segsolve/epsilon_solver.hpp"
#include "segsolve/grid.hpp"
#include "segsolve/limit_solver.hpp"
#include "segsolve/problem.hpp"

namespace test {

using namespace segsolve;

inline const double kPi = std::acos(-1.0);

inline std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(SEGSOLVE_CONFIG_DIR) / (name + ".cfg");
}

inline BoundaryDatum datum(std::size_t component, std::initializer_list<const char*> pieces) {
  BoundaryDatum d;
  d.component = component;
  for (const char* p : pieces) d.pieces.push_back(BoundaryPiece::parse(p));
  return d;
}

inline Problem make(const GridPtr& grid, const std::vector<BoundaryDatum>& data, std::vector<double> weights = {},
                    std::vector<double> alpha = {}) {
  const std::size_t m = data.size();
  if (weights.empty()) weights.assign(m, 1.0);
  if (alpha.empty()) alpha.assign(m, 1.0);
  return make_problem(grid, data, CouplingWeights::constants(grid, weights), alpha);
}

inline GridPtr unit_interval(int n) { return build_grid(DomainSpec::interval(0.0, 1.0), n); }

// phi = (1, 0) at x = 0 and (0, 1) at x = 1.
inline Problem line_m2(int n) {
  return make(unit_interval(n), {datum(0, {"side = left: 1"}), datum(1, {"side = right: 1"})});
}

// phi(0) = (1, 0, 0.5), phi(1) = (0, 1, 0.5).
inline Problem line_m3(int n) {
  return make(unit_interval(n), {datum(0, {"side = left: 1"}), datum(1, {"side = right: 1"}), datum(2, {"all: 0.5"})});
}

inline Problem shipped(const std::string& name, int n = 0) {
  SystemConfig cfg = parse_config(config_path(name));
  if (n > 0) {
    cfg.nx = n;
    cfg.ny = cfg.domain.kind == DomainKind::Interval ? 1 : n;
  }
  return build_problem(cfg);
}

inline SystemConfig shipped_config(const std::string& name) { return parse_config(config_path(name)); }

inline double x_of(const Grid& g, std::size_t k) { return g.position(k).x; }

inline double max_over_domain(const Grid& g, const auto& f) {
  double m = 0.0;
  for (std::size_t k : g.domain_nodes()) m = std::max(m, std::abs(f(k)));
  return m;
}

}  // namespace test
