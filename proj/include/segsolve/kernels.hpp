#pragma once

#include <span>
#include <vector>

#include "segsolve/grid.hpp"

// Data-parallel inner loops. The functions in `segsolve::kernels` are
// OpenMP-parallel; `segsolve::kernels::reference` holds plain serial loops
// with identical signatures, kept for testing and benchmarking.
//
// All node arrays have length grid.size(). Elementwise kernels give
// bitwise-identical results for any thread count; `dot` sums fixed-size
// chunks in a fixed order, so it is deterministic too (but not bitwise equal
// to the serial left-to-right sum).

namespace segsolve::kernels {

using FieldViews = std::span<const std::span<const double>>;

/// out = 5-point (3-point in 1D) Laplacian at interior nodes, 0 elsewhere.
void laplacian(const Grid& grid, std::span<const double> u, std::span<double> out);

/// y = (-Laplacian + c) x at interior nodes, 0 elsewhere. x must vanish off
/// the interior for this to be the Dirichlet operator.
void screened_apply(const Grid& grid, std::span<const double> c, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = x + a * y
void xpay(std::span<const double> x, double a, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
/// z = d * r elementwise
void hadamard(std::span<const double> d, std::span<const double> r, std::span<double> z);

/// Screened coefficient of one linearised sweep step for component `active`:
///
///   c = scale * A * [prod_{j<i} L_j + prod_{j<i} U_j] * prod_{j>i} L_j * L_i^(alpha_i - 1)
///
/// with every factor raised to its alpha. L are lagged iterates, U the
/// already-updated ones (only the first `active` entries are read).
/// Written at interior nodes, 0 elsewhere.
void reaction_coefficient(const Grid& grid, std::span<const double> weight, double scale, FieldViews lagged,
                          FieldViews updated, std::size_t active, std::span<const double> alpha,
                          std::span<double> out);

/// out = prod_j u_j^alpha_j at every node.
void reaction_product(FieldViews fields, std::span<const double> alpha, std::span<double> out);

namespace reference {

void laplacian(const Grid& grid, std::span<const double> u, std::span<double> out);
void screened_apply(const Grid& grid, std::span<const double> c, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpay(std::span<const double> x, double a, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
void hadamard(std::span<const double> d, std::span<const double> r, std::span<double> z);
void reaction_coefficient(const Grid& grid, std::span<const double> weight, double scale, FieldViews lagged,
                          FieldViews updated, std::size_t active, std::span<const double> alpha,
                          std::span<double> out);
void reaction_product(FieldViews fields, std::span<const double> alpha, std::span<double> out);

}  // namespace reference

/// Sets the OpenMP thread count used by the parallel kernels.
void set_threads(int threads);
int threads();

}  // namespace segsolve::kernels
