// Serial reference loops against the OpenMP kernels on square grids.
//
//   ./build/bench/kernels_bench --benchmark_filter=laplacian
//
// The thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "segsolve/elliptic.hpp"
#include "segsolve/grid.hpp"
#include "segsolve/kernels.hpp"

using namespace segsolve;

namespace {

struct Fixture {
  GridPtr grid;
  std::vector<double> u, c, out;
  std::vector<std::vector<double>> fields;

  explicit Fixture(int n) : grid(build_grid(DomainSpec::rectangle(-1, 1, -1, 1), n)) {
    const std::size_t size = grid->size();
    u.resize(size);
    c.resize(size);
    out.resize(size);
    for (std::size_t k = 0; k < size; ++k) {
      const Point p = grid->position(k);
      u[k] = std::sin(3.0 * p.x) * std::cos(2.0 * p.y) + 1.5;
      c[k] = 1.0 + p.x * p.x;
    }
    for (int i = 0; i < 4; ++i) {
      std::vector<double> f(size);
      for (std::size_t k = 0; k < size; ++k) f[k] = u[k] * (1.0 + 0.1 * i);
      fields.push_back(std::move(f));
    }
  }

  std::vector<std::span<const double>> views() const {
    std::vector<std::span<const double>> v;
    for (const auto& f : fields) v.emplace_back(f);
    return v;
  }
};

template <bool Parallel>
void BM_laplacian(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) kernels::laplacian(*f.grid, f.u, f.out);
    else kernels::reference::laplacian(*f.grid, f.u, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.grid->size()));
}

template <bool Parallel>
void BM_screened_apply(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel) kernels::screened_apply(*f.grid, f.c, f.u, f.out);
    else kernels::reference::screened_apply(*f.grid, f.c, f.u, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.grid->size()));
}

template <bool Parallel>
void BM_dot(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const double d = Parallel ? kernels::dot(f.u, f.c) : kernels::reference::dot(f.u, f.c);
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.grid->size()));
}

template <bool Parallel>
void BM_reaction_coefficient(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const auto lagged = f.views();
  const std::vector<std::span<const double>> updated(lagged.begin(), lagged.begin() + 2);
  const std::vector<double> alpha(4, 1.0);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::reaction_coefficient(*f.grid, f.c, 0.5e4, lagged, updated, 2, alpha, f.out);
    else kernels::reference::reaction_coefficient(*f.grid, f.c, 0.5e4, lagged, updated, 2, alpha, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.grid->size()));
}

// One screened solve with the CG method (built on the kernels above) and
// with the sparse direct method, for context.
void BM_screened_solve(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const auto method = state.range(1) == 0 ? LinearMethod::Direct : LinearMethod::ConjugateGradient;
  EllipticSolver solver(f.grid, {1e-10, method, 0});
  ScalarField coefficient(f.grid), boundary(f.grid);
  for (std::size_t k = 0; k < f.grid->size(); ++k) coefficient[k] = f.c[k];
  for (std::size_t k : f.grid->boundary_nodes()) boundary[k] = f.u[k];
  for (auto _ : state) {
    LinearSolution s = solver.screened(coefficient, boundary);
    benchmark::DoNotOptimize(s.field.values().data());
  }
  state.SetLabel(method == LinearMethod::Direct ? "direct" : "cg");
}

constexpr int kSizes[] = {101, 401, 1001};

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : kSizes) b->Arg(n);
}

}  // namespace

BENCHMARK(BM_laplacian<false>)->Name("laplacian/serial")->Apply(sizes);
BENCHMARK(BM_laplacian<true>)->Name("laplacian/openmp")->Apply(sizes);
BENCHMARK(BM_screened_apply<false>)->Name("screened_apply/serial")->Apply(sizes);
BENCHMARK(BM_screened_apply<true>)->Name("screened_apply/openmp")->Apply(sizes);
BENCHMARK(BM_dot<false>)->Name("dot/serial")->Apply(sizes);
BENCHMARK(BM_dot<true>)->Name("dot/openmp")->Apply(sizes);
BENCHMARK(BM_reaction_coefficient<false>)->Name("reaction_coefficient/serial")->Apply(sizes);
BENCHMARK(BM_reaction_coefficient<true>)->Name("reaction_coefficient/openmp")->Apply(sizes);
BENCHMARK(BM_screened_solve)->ArgsProduct({{101, 201}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
