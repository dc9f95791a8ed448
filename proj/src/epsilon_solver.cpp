#include "segsolve/epsilon_solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "segsolve/kernels.hpp"

namespace segsolve {

namespace {

std::vector<std::span<const double>> views(const FieldTuple& fields) {
  std::vector<std::span<const double>> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(f.values());
  return out;
}

}  // namespace

EpsilonSolver::EpsilonSolver(const Problem& problem, double epsilon, FixedPointOptions options)
    : problem_(problem), epsilon_(epsilon), options_(options), elliptic_(problem.grid, options.linear) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(options.tol_fp > 0.0)) throw std::invalid_argument("tol_fp must be positive");
}

IterationState EpsilonSolver::initialize() {
  IterationState state;
  for (const auto& phi : problem_.boundary) state.current.push_back(elliptic_.harmonic(phi).field);
  return state;
}

IterationState EpsilonSolver::sweep(const IterationState& state, SweepStats* stats) {
  const std::size_t m = problem_.components();
  const Grid& grid = *problem_.grid;
  const double scale = 1.0 / (2.0 * epsilon_);
  const auto lagged = views(state.current);

  IterationState next;
  next.k = state.k + 1;
  next.current.reserve(m);
  std::vector<std::span<const double>> updated;
  ScalarField coefficient(problem_.grid);
  SweepStats local;

  for (std::size_t i = 0; i < m; ++i) {
    kernels::reaction_coefficient(grid, problem_.weights.field(i).values(), scale, lagged, updated, i,
                                  problem_.alpha, coefficient.values());
    LinearSolution sol = elliptic_.screened(coefficient, problem_.boundary[i]);
    local.linear_iterations += sol.stats.iterations;
    local.max_relative_residual = std::max(local.max_relative_residual, sol.stats.relative_residual);
    next.current.push_back(std::move(sol.field));
    updated.push_back(options_.scheme == SweepScheme::Lagged ? lagged[i] : next.current.back().values());
  }
  next.previous = state.current;
  next.gap = max_abs_difference(next.current, next.previous);
  if (stats) *stats = local;
  return next;
}

SolveResult EpsilonSolver::solve(const IterationObserver& observer, const std::optional<FieldTuple>& start) {
  const auto t0 = std::chrono::steady_clock::now();
  IterationState state;
  if (start) {
    if (start->size() != problem_.components()) throw std::invalid_argument("start tuple has wrong length");
    state.current = *start;
    for (std::size_t i = 0; i < state.current.size(); ++i) {
      auto& f = state.current[i];
      if (f.grid_ptr() != problem_.grid) throw std::invalid_argument("start field is on another grid");
      for (std::size_t k : problem_.grid->boundary_nodes()) f[k] = problem_.boundary[i][k];
      for (std::size_t k : problem_.grid->interior_nodes()) {
        if (!(f[k] >= 0.0)) throw std::invalid_argument("start fields must be nonnegative");
      }
    }
  } else {
    state = initialize();
  }
  if (observer) observer(state);

  const double threshold = options_.tol_fp * problem_.max_boundary();
  SolveResult result;
  result.epsilon = epsilon_;
  double last_gap = std::numeric_limits<double>::infinity();

  for (std::size_t s = 1; s <= options_.max_sweeps; ++s) {
    SweepStats stats;
    IterationState next = sweep(state, &stats);
    result.sweep_stats.push_back(stats);
    if (observer) observer(next);
    if (next.k % 2 == 1) {
      last_gap = next.gap;
      if (next.gap <= threshold) {
        result.upper = std::move(next.previous);
        result.lower = std::move(next.current);
        for (std::size_t i = 0; i < result.upper.size(); ++i) {
          result.fields.push_back(0.5 * (result.upper[i] + result.lower[i]));
        }
        result.sweeps = s;
        result.final_gap = next.gap;
        result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return result;
      }
    }
    state = std::move(next);
  }
  std::ostringstream msg;
  msg << "fixed-point iteration did not converge within " << options_.max_sweeps << " sweeps (eps=" << epsilon_
      << ", last even/odd gap " << last_gap << " > " << threshold << ")";
  throw ConvergenceError(msg.str(), last_gap, options_.max_sweeps);
}

SolveResult solve_epsilon(const Problem& problem, double epsilon, const FixedPointOptions& options,
                          const IterationObserver& observer) {
  EpsilonSolver solver(problem, epsilon, options);
  return solver.solve(observer);
}

double difference_harmonicity_check(const SolveResult& result) {
  double worst = 0.0;
  const auto& u = result.fields;
  if (u.empty()) return 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    const ScalarField lap = apply_laplacian(u[0] - u[i]);
    for (std::size_t k : u[0].grid().interior_nodes()) worst = std::max(worst, std::abs(lap[k]));
  }
  return worst;
}

bool difference_identity_applies(const Problem& problem) {
  return problem.weights.identical() && problem.unit_exponents();
}

}  // namespace segsolve
