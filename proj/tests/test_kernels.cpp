#include <doctest.h>

#include <random>

#include "segsolve/kernels.hpp"
#include "support.hpp"

using namespace test;
namespace k = segsolve::kernels;

namespace {

std::vector<double> random_field(const Grid& g, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t n : g.domain_nodes()) v[n] = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
  const GridPtr g = build_grid(DomainSpec::disk({0, 0}, 1), 151);
  const auto a = random_field(*g, 1);
  const auto b = random_field(*g, 2);
  const auto c = random_field(*g, 3);
  const std::size_t n = g->size();

  std::vector<double> p(n), r(n);
  k::laplacian(*g, a, p);
  k::reference::laplacian(*g, a, r);
  CHECK(p == r);

  k::screened_apply(*g, c, a, p);
  k::reference::screened_apply(*g, c, a, r);
  CHECK(p == r);

  std::vector<double> y1 = b, y2 = b;
  k::axpy(0.3, a, y1);
  k::reference::axpy(0.3, a, y2);
  CHECK(y1 == y2);
  k::xpay(a, -1.7, y1);
  k::reference::xpay(a, -1.7, y2);
  CHECK(y1 == y2);
  k::hadamard(a, b, p);
  k::reference::hadamard(a, b, r);
  CHECK(p == r);

  CHECK(k::max_abs_diff(a, b) == k::reference::max_abs_diff(a, b));
  CHECK(k::dot(a, b) == doctest::Approx(k::reference::dot(a, b)).epsilon(1e-13));

  const std::vector<double> alpha = {1.0, 2.0, 1.5};
  const std::vector<std::span<const double>> lagged = {a, b, c};
  const std::vector<std::span<const double>> updated = {c, a};
  const std::vector<double> weight(n, 0.7);
  for (std::size_t active = 0; active < 3; ++active) {
    k::reaction_coefficient(*g, weight, 123.0, lagged, std::span(updated).first(active), active, alpha, p);
    k::reference::reaction_coefficient(*g, weight, 123.0, lagged, std::span(updated).first(active), active, alpha, r);
    for (std::size_t i = 0; i < n; ++i) CHECK(p[i] == doctest::Approx(r[i]).epsilon(1e-13));
  }
  k::reaction_product(lagged, alpha, p);
  k::reference::reaction_product(lagged, alpha, r);
  for (std::size_t i = 0; i < n; ++i) CHECK(p[i] == doctest::Approx(r[i]).epsilon(1e-13));
}

TEST_CASE("kernel results do not depend on the thread count") {
  const GridPtr g = build_grid(DomainSpec::rectangle(0, 1, 0, 1), 201);
  const auto a = random_field(*g, 7);
  const auto b = random_field(*g, 8);
  const int saved = k::threads();
  k::set_threads(1);
  const double d1 = k::dot(a, b);
  std::vector<double> l1(g->size());
  k::laplacian(*g, a, l1);
  k::set_threads(4);
  const double d4 = k::dot(a, b);
  std::vector<double> l4(g->size());
  k::laplacian(*g, a, l4);
  k::set_threads(saved);
  CHECK(d1 == d4);
  CHECK(l1 == l4);
}

TEST_CASE("reaction coefficient by hand") {
  // c = scale * A * [L1*L2 ... ] for component 1 of 3 with alpha = 1:
  // c = scale * A * (L0 + U0) * L2
  const GridPtr g = unit_interval(7);
  const std::size_t n = g->size();
  std::vector<double> l0(n, 2.0), l1(n, 5.0), l2(n, 3.0), u0(n, 0.5), w(n, 1.5), out(n);
  const std::vector<std::span<const double>> lagged = {l0, l1, l2};
  const std::vector<std::span<const double>> updated = {u0};
  const std::vector<double> alpha = {1, 1, 1};
  k::reaction_coefficient(*g, w, 0.5, lagged, updated, 1, alpha, out);
  for (std::size_t i : g->interior_nodes()) CHECK(out[i] == doctest::Approx(0.5 * 1.5 * (2.0 + 0.5) * 3.0));
  CHECK(out[0] == 0.0);
  CHECK(out[n - 1] == 0.0);
}

TEST_CASE("discrete Laplacian on polynomials") {
  const GridPtr line = build_grid(DomainSpec::interval(0, 1), 17);
  std::vector<double> u(line->size()), out(line->size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = x_of(*line, i) * x_of(*line, i);
  k::laplacian(*line, u, out);
  for (std::size_t i : line->interior_nodes()) CHECK(out[i] == doctest::Approx(2.0).epsilon(1e-9));

  const GridPtr sq = build_grid(DomainSpec::rectangle(-1, 1, -1, 1), 21);
  std::vector<double> v(sq->size()), lap(sq->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point p = sq->position(i);
    v[i] = p.x * p.x - p.y * p.y;
  }
  k::laplacian(*sq, v, lap);
  for (std::size_t i : sq->interior_nodes()) CHECK(std::abs(lap[i]) < 1e-10);
  std::vector<double> ones(sq->size(), 3.0);
  k::laplacian(*sq, ones, lap);
  for (std::size_t i : sq->interior_nodes()) CHECK(lap[i] == 0.0);
}
