#pragma once

#include <cstddef>
#include <memory>

#include "segsolve/field.hpp"

namespace segsolve {

enum class LinearMethod {
  Auto,               // Direct
  Direct,             // tridiagonal elimination in 1D, sparse LDL^T in 2D
  ConjugateGradient,  // Jacobi-preconditioned CG on the OpenMP kernels
};

struct LinearSolverOptions {
  double tolerance = 1e-10;  // relative residual ||b - Au|| / ||b||
  LinearMethod method = LinearMethod::Auto;
  std::size_t max_iterations = 0;  // 0: 50 * sqrt(total nodes)
};

struct LinearSolveStats {
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = true;
};

struct LinearSolution {
  ScalarField field;
  LinearSolveStats stats;
};

/// Discrete Laplacian at interior nodes, 0 elsewhere.
ScalarField apply_laplacian(const ScalarField& u);

/// Dirichlet solver for  Lap_h u = c u  on one grid.
///
/// The sparsity pattern (and for the direct method its symbolic
/// factorisation) is built once and reused across solves, so an instance
/// should be kept alive over a sequence of solves on the same grid. Not safe
/// for concurrent use; give each thread its own instance.
///
/// Results obey the discrete maximum principle exactly: values within
/// 1e-14 * M of the admissible range [lo, hi] (lo = 0 for screened solves,
/// min boundary value for harmonic ones; hi = max boundary value) are
/// clamped into it.
class EllipticSolver {
 public:
  explicit EllipticSolver(GridPtr grid, LinearSolverOptions options = {});
  ~EllipticSolver();
  EllipticSolver(EllipticSolver&&) noexcept;
  EllipticSolver& operator=(EllipticSolver&&) noexcept;

  const GridPtr& grid() const noexcept;
  const LinearSolverOptions& options() const noexcept;

  /// Harmonic extension of the values held at boundary nodes of `boundary`.
  /// Throws SolverError when the iterative method hits its cap.
  LinearSolution harmonic(const ScalarField& boundary);

  /// Screened solve with coefficient c >= 0 and boundary values >= 0.
  /// Throws std::invalid_argument for a negative coefficient or boundary
  /// value, SolverError on non-convergence.
  LinearSolution screened(const ScalarField& coefficient, const ScalarField& boundary);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LinearSolution solve_harmonic(const GridPtr& grid, const ScalarField& boundary, LinearSolverOptions options = {});
LinearSolution solve_screened(const GridPtr& grid, const ScalarField& coefficient, const ScalarField& boundary,
                              LinearSolverOptions options = {});

}  // namespace segsolve
