#include "segsolve/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

namespace segsolve::kernels {

namespace {

constexpr std::ptrdiff_t kParallelThreshold = 4096;
constexpr std::size_t kDotChunk = 2048;

inline double raise(double v, double a) { return a == 1.0 ? v : std::pow(v, a); }

struct Stencil {
  std::ptrdiff_t stride_x = 1;
  std::ptrdiff_t stride_y = 0;
  double wx = 0.0;
  double wy = 0.0;
};

Stencil stencil_of(const Grid& g) {
  Stencil s;
  s.stride_x = 1;
  s.wx = 1.0 / (g.hx() * g.hx());
  if (g.dimension() == 2) {
    s.stride_y = g.nx();
    s.wy = 1.0 / (g.hy() * g.hy());
  }
  return s;
}

inline double lap_at(const Stencil& s, const double* u, std::size_t k) {
  double v = s.wx * (u[k - s.stride_x] + u[k + s.stride_x] - 2.0 * u[k]);
  if (s.stride_y != 0) v += s.wy * (u[k - s.stride_y] + u[k + s.stride_y] - 2.0 * u[k]);
  return v;
}

inline double coefficient_at(std::size_t k, std::span<const double> weight, double scale, FieldViews lagged,
                             FieldViews updated, std::size_t active, std::span<const double> alpha) {
  double head_old = 1.0;
  double head_new = 1.0;
  for (std::size_t j = 0; j < active; ++j) {
    head_old *= raise(lagged[j][k], alpha[j]);
    head_new *= raise(updated[j][k], alpha[j]);
  }
  double tail = 1.0;
  for (std::size_t j = active + 1; j < lagged.size(); ++j) tail *= raise(lagged[j][k], alpha[j]);
  const double self = alpha[active] == 1.0 ? 1.0 : std::pow(lagged[active][k], alpha[active] - 1.0);
  return scale * weight[k] * (head_old + head_new) * tail * self;
}

inline double product_at(std::size_t k, FieldViews fields, std::span<const double> alpha) {
  double p = 1.0;
  for (std::size_t j = 0; j < fields.size(); ++j) p *= raise(fields[j][k], alpha[j]);
  return p;
}

}  // namespace

void set_threads(int n) { omp_set_num_threads(std::max(1, n)); }
int threads() { return omp_get_max_threads(); }

void laplacian(const Grid& grid, std::span<const double> u, std::span<double> out) {
  const Stencil s = stencil_of(grid);
  const auto interior = grid.interior_nodes();
  const auto n = static_cast<std::ptrdiff_t>(interior.size());
  std::fill(out.begin(), out.end(), 0.0);
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const std::size_t k = interior[t];
    out[k] = lap_at(s, u.data(), k);
  }
}

void screened_apply(const Grid& grid, std::span<const double> c, std::span<const double> x, std::span<double> y) {
  const Stencil s = stencil_of(grid);
  const auto interior = grid.interior_nodes();
  const auto n = static_cast<std::ptrdiff_t>(interior.size());
  std::fill(y.begin(), y.end(), 0.0);
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const std::size_t k = interior[t];
    y[k] = c[k] * x[k] - lap_at(s, x.data(), k);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t chunks = (n + kDotChunk - 1) / kDotChunk;
  std::vector<double> partial(chunks, 0.0);
  const auto nc = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static) if (nc > 2)
  for (std::ptrdiff_t c = 0; c < nc; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kDotChunk;
    const std::size_t hi = std::min(n, lo + kDotChunk);
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += a[i] * b[i];
    partial[c] = sum;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay(std::span<const double> x, double a, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void hadamard(std::span<const double> d, std::span<const double> r, std::span<double> z) {
  const auto n = static_cast<std::ptrdiff_t>(d.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) z[i] = d[i] * r[i];
}

void reaction_coefficient(const Grid& grid, std::span<const double> weight, double scale, FieldViews lagged,
                          FieldViews updated, std::size_t active, std::span<const double> alpha,
                          std::span<double> out) {
  const auto interior = grid.interior_nodes();
  const auto n = static_cast<std::ptrdiff_t>(interior.size());
  std::fill(out.begin(), out.end(), 0.0);
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const std::size_t k = interior[t];
    out[k] = coefficient_at(k, weight, scale, lagged, updated, active, alpha);
  }
}

void reaction_product(FieldViews fields, std::span<const double> alpha, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (n > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = product_at(static_cast<std::size_t>(i), fields, alpha);
}

namespace reference {

void laplacian(const Grid& grid, std::span<const double> u, std::span<double> out) {
  const Stencil s = stencil_of(grid);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k : grid.interior_nodes()) out[k] = lap_at(s, u.data(), k);
}

void screened_apply(const Grid& grid, std::span<const double> c, std::span<const double> x, std::span<double> y) {
  const Stencil s = stencil_of(grid);
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t k : grid.interior_nodes()) y[k] = c[k] * x[k] - lap_at(s, x.data(), k);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpay(std::span<const double> x, double a, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + a * y[i];
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void hadamard(std::span<const double> d, std::span<const double> r, std::span<double> z) {
  for (std::size_t i = 0; i < d.size(); ++i) z[i] = d[i] * r[i];
}

void reaction_coefficient(const Grid& grid, std::span<const double> weight, double scale, FieldViews lagged,
                          FieldViews updated, std::size_t active, std::span<const double> alpha,
                          std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const std::size_t m = lagged.size();
  for (std::size_t k : grid.interior_nodes()) {
    double all_lagged = 1.0;
    double mixed = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == active) continue;
      all_lagged *= std::pow(lagged[j][k], alpha[j]);
      mixed *= std::pow(j < active ? updated[j][k] : lagged[j][k], alpha[j]);
    }
    const double self = std::pow(lagged[active][k], alpha[active] - 1.0);
    out[k] = scale * weight[k] * (all_lagged + mixed) * self;
  }
}

void reaction_product(FieldViews fields, std::span<const double> alpha, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j < fields.size(); ++j) p *= std::pow(fields[j][i], alpha[j]);
    out[i] = p;
  }
}

}  // namespace reference

}  // namespace segsolve::kernels
