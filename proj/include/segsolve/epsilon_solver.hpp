#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "segsolve/elliptic.hpp"
#include "segsolve/errors.hpp"
#include "segsolve/problem.hpp"

namespace segsolve {

enum class SweepScheme {
  Averaged,  // mean of the lagged and the partially updated products
  Lagged,    // every other factor taken from U^k
};

struct FixedPointOptions {
  double tol_fp = 1e-8;  // stop when the even/odd gap is <= tol_fp * M
  std::size_t max_sweeps = 5000;
  LinearSolverOptions linear;
  SweepScheme scheme = SweepScheme::Averaged;
};

/// Iterate U^k of the decoupled fixed-point scheme. U^0 is the tuple of
/// harmonic extensions; `gap` is max_i ||u_i^k - u_i^{k-1}||_inf.
struct IterationState {
  std::size_t k = 0;
  FieldTuple current;
  FieldTuple previous;
  double gap = std::numeric_limits<double>::quiet_NaN();
};

struct SweepStats {
  std::size_t linear_iterations = 0;
  double max_relative_residual = 0.0;
};

struct SolveResult {
  FieldTuple fields;  // midpoint of the final even/odd pair
  FieldTuple upper;   // last even iterate
  FieldTuple lower;   // last odd iterate
  double epsilon = 0.0;
  std::size_t sweeps = 0;
  double final_gap = 0.0;
  std::vector<SweepStats> sweep_stats;
  double wall_seconds = 0.0;
};

/// Thrown when max_sweeps is exhausted; carries the last even/odd gap.
class ConvergenceError : public SolverError {
 public:
  ConvergenceError(const std::string& message, double last_gap, std::size_t sweeps)
      : SolverError(message), last_gap_(last_gap), sweeps_(sweeps) {}
  double last_gap() const noexcept { return last_gap_; }
  std::size_t sweeps() const noexcept { return sweeps_; }

 private:
  double last_gap_;
  std::size_t sweeps_;
};

using IterationObserver = std::function<void(const IterationState&)>;

/// Monotone fixed-point solver for  Lap u_i = (A_i / eps) prod_j u_j^alpha_j.
///
/// Each sweep solves, for i = 1..m in order, the linear screened problem
///
///   Lap u_i^{k+1} = c_i u_i^{k+1},
///   c_i = A_i / (2 eps) [prod_{j<i} u_j^k + prod_{j<i} u_j^{k+1}] prod_{j>i} u_j^k,
///
/// with the own factor lagged as (u_i^k)^(alpha_i - 1) for alpha_i > 1.
/// Iteration stops on the gap between consecutive even/odd iterates and
/// returns their midpoint.
///
/// SweepScheme::Lagged uses c_i = A_i / eps prod_{j!=i} u_j^k instead. That
/// map is order-reversing, so for alpha = 1 its even iterates decrease and
/// its odd iterates increase. The averaged scheme carries no such ordering:
/// u_i^{k+1} grows with u_j^k (j < i) through the updated factors.
class EpsilonSolver {
 public:
  EpsilonSolver(const Problem& problem, double epsilon, FixedPointOptions options = {});

  const Problem& problem() const noexcept { return problem_; }
  double epsilon() const noexcept { return epsilon_; }

  /// U^0 = harmonic extensions of the boundary data.
  IterationState initialize();
  /// One sweep over all components.
  IterationState sweep(const IterationState& state, SweepStats* stats = nullptr);

  /// Sweeps until the even/odd gap is below tol_fp * M. `start` replaces
  /// U^0 (boundary values are reset to the data); `observer` sees every
  /// iterate including the start. Throws ConvergenceError after max_sweeps.
  SolveResult solve(const IterationObserver& observer = {}, const std::optional<FieldTuple>& start = {});

 private:
  Problem problem_;
  double epsilon_;
  FixedPointOptions options_;
  EllipticSolver elliptic_;
};

SolveResult solve_epsilon(const Problem& problem, double epsilon, const FixedPointOptions& options = {},
                          const IterationObserver& observer = {});

/// max over i of the interior sup norm of Lap_h(u_1 - u_{i+1}). Vanishes at
/// the exact discrete solution when all A_i coincide and alpha = 1.
double difference_harmonicity_check(const SolveResult& result);

/// Whether the difference identity above is expected to hold.
bool difference_identity_applies(const Problem& problem);

}  // namespace segsolve
