#include "segsolve/elliptic.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "segsolve/errors.hpp"
#include "segsolve/kernels.hpp"

namespace segsolve {

namespace {

constexpr double kClampBand = 1e-14;

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

}  // namespace

struct EllipticSolver::Impl {
  GridPtr grid;
  LinearSolverOptions options;
  double wx = 0.0;
  double wy = 0.0;
  std::vector<std::ptrdiff_t> unknown_of;  // node -> unknown, -1 if not interior

  // 2D direct path
  Eigen::SparseMatrix<double> matrix;
  std::vector<Eigen::Index> diagonal_slot;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt;
  bool analysed = false;

  Impl(GridPtr g, LinearSolverOptions o) : grid(std::move(g)), options(o) {
    wx = 1.0 / (grid->hx() * grid->hx());
    if (grid->dimension() == 2) wy = 1.0 / (grid->hy() * grid->hy());
    unknown_of.assign(grid->size(), -1);
    const auto interior = grid->interior_nodes();
    for (std::size_t u = 0; u < interior.size(); ++u) unknown_of[interior[u]] = static_cast<std::ptrdiff_t>(u);
    if (options.max_iterations == 0) {
      options.max_iterations =
          static_cast<std::size_t>(std::ceil(50.0 * std::sqrt(static_cast<double>(grid->size()))));
    }
  }

  bool direct() const { return options.method != LinearMethod::ConjugateGradient; }

  double base_diagonal() const { return 2.0 * wx + 2.0 * wy; }

  // Right-hand side at interior nodes from the known boundary neighbours.
  std::vector<double> boundary_rhs(const ScalarField& boundary) const {
    const Grid& g = *grid;
    std::vector<double> b(g.size(), 0.0);
    const std::ptrdiff_t sy = g.nx();
    for (std::size_t k : g.interior_nodes()) {
      double v = 0.0;
      auto add = [&](std::size_t nb, double w) {
        if (g.node_class(nb) == NodeClass::Boundary) v += w * boundary[nb];
      };
      add(k - 1, wx);
      add(k + 1, wx);
      if (g.dimension() == 2) {
        add(k - sy, wy);
        add(k + sy, wy);
      }
      b[k] = v;
    }
    return b;
  }

  void build_matrix() {
    const Grid& g = *grid;
    const auto interior = g.interior_nodes();
    const auto n = static_cast<Eigen::Index>(interior.size());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(interior.size() * 3);
    const std::ptrdiff_t sy = g.nx();
    for (std::size_t u = 0; u < interior.size(); ++u) {
      const std::size_t k = interior[u];
      const auto row = static_cast<Eigen::Index>(u);
      entries.emplace_back(row, row, base_diagonal());
      // lower triangle only: neighbours with a smaller unknown index
      for (std::ptrdiff_t off : {std::ptrdiff_t{1}, sy}) {
        const std::size_t nb = k - static_cast<std::size_t>(off);
        if (unknown_of[nb] >= 0) {
          entries.emplace_back(row, static_cast<Eigen::Index>(unknown_of[nb]), off == 1 ? -wx : -wy);
        }
      }
    }
    matrix.resize(n, n);
    matrix.setFromTriplets(entries.begin(), entries.end());
    matrix.makeCompressed();
    diagonal_slot.assign(interior.size(), -1);
    for (Eigen::Index col = 0; col < matrix.outerSize(); ++col) {
      for (Eigen::Index p = matrix.outerIndexPtr()[col]; p < matrix.outerIndexPtr()[col + 1]; ++p) {
        if (matrix.innerIndexPtr()[p] == col) diagonal_slot[col] = p;
      }
    }
  }

  // Interior values of the solution into `x` (full-node array).
  std::size_t solve_direct(std::span<const double> c, std::span<const double> b, std::vector<double>& x) {
    const Grid& g = *grid;
    const auto interior = g.interior_nodes();
    if (g.dimension() == 1) {
      // Thomas elimination; interior unknowns are nodes 1..n-2 in order.
      const std::size_t n = interior.size();
      std::vector<double> cp(n), dp(n);
      const double off = -wx;
      for (std::size_t u = 0; u < n; ++u) {
        const std::size_t k = interior[u];
        const double diag = 2.0 * wx + c[k];
        if (u == 0) {
          cp[u] = off / diag;
          dp[u] = b[k] / diag;
        } else {
          const double denom = diag - off * cp[u - 1];
          cp[u] = off / denom;
          dp[u] = (b[k] - off * dp[u - 1]) / denom;
        }
      }
      for (std::size_t u = n; u-- > 0;) {
        const double next = (u + 1 < n) ? x[interior[u + 1]] : 0.0;
        x[interior[u]] = dp[u] - cp[u] * next;
      }
      return 1;
    }

    if (matrix.rows() == 0) build_matrix();
    double* values = matrix.valuePtr();
    for (std::size_t u = 0; u < interior.size(); ++u) values[diagonal_slot[u]] = base_diagonal() + c[interior[u]];
    if (!analysed) {
      ldlt.analyzePattern(matrix);
      analysed = true;
    }
    ldlt.factorize(matrix);
    if (ldlt.info() != Eigen::Success) throw SolverError("sparse LDL^T factorisation failed");
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t u = 0; u < interior.size(); ++u) rhs[static_cast<Eigen::Index>(u)] = b[interior[u]];
    const Eigen::VectorXd sol = ldlt.solve(rhs);
    for (std::size_t u = 0; u < interior.size(); ++u) x[interior[u]] = sol[static_cast<Eigen::Index>(u)];
    return 1;
  }

  std::size_t solve_cg(std::span<const double> c, std::span<const double> b, double bnorm, std::vector<double>& x) {
    const Grid& g = *grid;
    const std::size_t n = g.size();
    std::vector<double> inv_diag(n, 0.0), r(b.begin(), b.end()), z(n), p(n), ap(n);
    for (std::size_t k : g.interior_nodes()) inv_diag[k] = 1.0 / (base_diagonal() + c[k]);
    std::fill(x.begin(), x.end(), 0.0);
    kernels::hadamard(inv_diag, r, z);
    p = z;
    double rz = kernels::dot(r, z);
    const double target = options.tolerance * bnorm;
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
      kernels::screened_apply(g, c, p, ap);
      const double step = rz / kernels::dot(p, ap);
      kernels::axpy(step, p, x);
      kernels::axpy(-step, ap, r);
      if (norm2(r) <= target) return it;
      kernels::hadamard(inv_diag, r, z);
      const double rz_next = kernels::dot(r, z);
      kernels::xpay(z, rz_next / rz, p);
      rz = rz_next;
    }
    return options.max_iterations + 1;
  }

  LinearSolution solve(const ScalarField& coefficient, const ScalarField& boundary, double lo, double hi) {
    const Grid& g = *grid;
    if (boundary.grid_ptr() != grid || coefficient.grid_ptr() != grid) {
      throw std::invalid_argument("field is not on the solver's grid");
    }
    for (std::size_t k : g.boundary_nodes()) {
      if (!std::isfinite(boundary[k])) throw std::invalid_argument("non-finite boundary value");
    }

    const std::vector<double> b = boundary_rhs(boundary);
    const double bnorm = norm2(b);
    std::vector<double> x(g.size(), 0.0);
    LinearSolveStats stats;

    if (bnorm > 0.0) {
      const auto c = coefficient.values();
      stats.iterations = direct() ? solve_direct(c, b, x) : solve_cg(c, b, bnorm, x);
      std::vector<double> ax(g.size());
      kernels::screened_apply(g, c, x, ax);
      for (std::size_t k : g.interior_nodes()) ax[k] = b[k] - ax[k];
      stats.relative_residual = norm2(ax) / bnorm;
      stats.converged = stats.relative_residual <= options.tolerance && stats.iterations <= options.max_iterations;
      if (!stats.converged) {
        std::ostringstream msg;
        msg << "linear solve did not converge: " << std::min(stats.iterations, options.max_iterations)
            << " iterations, relative residual " << stats.relative_residual << " > " << options.tolerance;
        throw SolverError(msg.str());
      }
    }

    ScalarField u(grid);
    for (std::size_t k : g.boundary_nodes()) u[k] = boundary[k];
    const double band = kClampBand * std::max({std::abs(lo), std::abs(hi), 1e-300});
    for (std::size_t k : g.interior_nodes()) {
      double v = x[k];
      if (v < lo && v > lo - band) v = lo;
      if (v > hi && v < hi + band) v = hi;
      u[k] = v;
    }
    return {std::move(u), stats};
  }
};

EllipticSolver::EllipticSolver(GridPtr grid, LinearSolverOptions options)
    : impl_(std::make_unique<Impl>(std::move(grid), options)) {}
EllipticSolver::~EllipticSolver() = default;
EllipticSolver::EllipticSolver(EllipticSolver&&) noexcept = default;
EllipticSolver& EllipticSolver::operator=(EllipticSolver&&) noexcept = default;

const GridPtr& EllipticSolver::grid() const noexcept { return impl_->grid; }
const LinearSolverOptions& EllipticSolver::options() const noexcept { return impl_->options; }

LinearSolution EllipticSolver::harmonic(const ScalarField& boundary) {
  const Grid& g = *impl_->grid;
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (std::size_t k : g.boundary_nodes()) {
    lo = first ? boundary[k] : std::min(lo, boundary[k]);
    hi = first ? boundary[k] : std::max(hi, boundary[k]);
    first = false;
  }
  return impl_->solve(ScalarField(impl_->grid, 0.0), boundary, lo, hi);
}

LinearSolution EllipticSolver::screened(const ScalarField& coefficient, const ScalarField& boundary) {
  const Grid& g = *impl_->grid;
  for (std::size_t k : g.interior_nodes()) {
    if (!(coefficient[k] >= 0.0) || !std::isfinite(coefficient[k])) {
      throw std::invalid_argument("screened coefficient must be finite and nonnegative");
    }
  }
  double hi = 0.0;
  for (std::size_t k : g.boundary_nodes()) {
    if (boundary[k] < 0.0) throw std::invalid_argument("screened solve needs nonnegative boundary values");
    hi = std::max(hi, boundary[k]);
  }
  return impl_->solve(coefficient, boundary, 0.0, hi);
}

ScalarField apply_laplacian(const ScalarField& u) {
  ScalarField out(u.grid_ptr());
  kernels::laplacian(u.grid(), u.values(), out.values());
  return out;
}

LinearSolution solve_harmonic(const GridPtr& grid, const ScalarField& boundary, LinearSolverOptions options) {
  EllipticSolver solver(grid, options);
  return solver.harmonic(boundary);
}

LinearSolution solve_screened(const GridPtr& grid, const ScalarField& coefficient, const ScalarField& boundary,
                              LinearSolverOptions options) {
  EllipticSolver solver(grid, options);
  return solver.screened(coefficient, boundary);
}

}  // namespace segsolve
