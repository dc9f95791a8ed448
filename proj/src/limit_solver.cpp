#include "segsolve/limit_solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace segsolve {

FieldTuple harmonic_differences(const Problem& problem, std::size_t pivot, EllipticSolver& solver) {
  const std::size_t m = problem.components();
  if (pivot >= m) throw std::invalid_argument("pivot out of range");
  FieldTuple out;
  out.reserve(m - 1);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == pivot) continue;
    out.push_back(solver.harmonic(problem.boundary[pivot] - problem.boundary[j]).field);
  }
  return out;
}

FieldTuple harmonic_differences(const Problem& problem, std::size_t pivot, const LinearSolverOptions& options) {
  EllipticSolver solver(problem.grid, options);
  return harmonic_differences(problem, pivot, solver);
}

LimitResult construct_limit(FieldTuple differences, std::size_t pivot) {
  if (differences.empty()) throw std::invalid_argument("need at least one difference field");
  const std::size_t m = differences.size() + 1;
  if (pivot >= m) throw std::invalid_argument("pivot out of range");
  const GridPtr& grid = differences.front().grid_ptr();
  for (const auto& w : differences) {
    if (w.grid_ptr() != grid) throw std::invalid_argument("difference fields must share a grid");
  }

  ScalarField top(grid);
  for (std::size_t k : grid->domain_nodes()) {
    double v = 0.0;
    for (const auto& w : differences) v = std::max(v, w[k]);
    top[k] = v;
  }

  LimitResult result;
  result.pivot = pivot;
  result.fields.reserve(m);
  std::size_t next = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == pivot) {
      result.fields.push_back(top);
    } else {
      result.fields.push_back(top - differences[next++]);
    }
  }
  result.differences = std::move(differences);
  return result;
}

LimitResult solve_limit(const Problem& problem, std::size_t pivot, const LinearSolverOptions& options) {
  return construct_limit(harmonic_differences(problem, pivot, options), pivot);
}

double pivot_equivalence_check(const Problem& problem, std::size_t p, std::size_t q,
                               const LinearSolverOptions& options) {
  EllipticSolver solver(problem.grid, options);
  const LimitResult a = construct_limit(harmonic_differences(problem, p, solver), p);
  const LimitResult b = construct_limit(harmonic_differences(problem, q, solver), q);
  return max_abs_difference(a.fields, b.fields);
}

bool limit_scope_holds(const Problem& problem) { return problem.weights.identical(); }

}  // namespace segsolve
