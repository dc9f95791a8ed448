#pragma once

#include <cstddef>

#include "segsolve/elliptic.hpp"
#include "segsolve/problem.hpp"

namespace segsolve {

/// Explicit eps -> 0 limit built from harmonic differences.
///
/// `differences` holds w_j for j != pivot in ascending j, so it has m - 1
/// entries. Invariants (exact, by construction): u_i >= 0, the product of
/// all u_i vanishes at every node. u_pivot - u_j equals w_j up to the
/// rounding of one subtraction.
struct LimitResult {
  FieldTuple fields;
  FieldTuple differences;
  std::size_t pivot = 0;  // 0-based
};

/// w_j = harmonic extension of phi_pivot - phi_j for every j != pivot.
FieldTuple harmonic_differences(const Problem& problem, std::size_t pivot, EllipticSolver& solver);
FieldTuple harmonic_differences(const Problem& problem, std::size_t pivot, const LinearSolverOptions& options = {});

/// u_pivot = max(max_j w_j, 0), u_j = u_pivot - w_j.
LimitResult construct_limit(FieldTuple differences, std::size_t pivot);

LimitResult solve_limit(const Problem& problem, std::size_t pivot = 0, const LinearSolverOptions& options = {});

/// max_i || u_i^(p) - u_i^(q) ||_inf between the constructions with pivots p and q.
double pivot_equivalence_check(const Problem& problem, std::size_t p, std::size_t q,
                               const LinearSolverOptions& options = {});

/// The construction is the proven limit only when all weights coincide.
bool limit_scope_holds(const Problem& problem);

}  // namespace segsolve
