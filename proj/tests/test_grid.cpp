#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace test;

TEST_CASE("interval grid with five nodes") {
  const GridPtr g = build_grid(DomainSpec::interval(0.0, 1.0), 5);
  REQUIRE(g->size() == 5);
  CHECK(g->dimension() == 1);
  const double expect[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (std::size_t k = 0; k < 5; ++k) CHECK(g->position(k).x == doctest::Approx(expect[k]).epsilon(1e-15));
  CHECK(g->node_class(0) == NodeClass::Boundary);
  CHECK(g->node_class(4) == NodeClass::Boundary);
  for (std::size_t k = 1; k < 4; ++k) CHECK(g->is_interior(k));
}

TEST_CASE("rectangle grid counts") {
  const GridPtr g = build_grid(DomainSpec::rectangle(-1, 1, -1, 1), 5);
  CHECK(g->interior_nodes().size() == 9);
  CHECK(g->boundary_nodes().size() == 16);
  CHECK(g->hx() == doctest::Approx(0.5));
  CHECK(g->origin().x == -1.0);
  CHECK(g->origin().y == -1.0);
}

TEST_CASE("disk interior count matches a brute-force point-in-circle count") {
  const int n = 101;
  const GridPtr g = build_grid(DomainSpec::disk({0, 0}, 1.0), n);
  const double h = 2.0 / (n - 1);
  std::size_t inside = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = -1.0 + i * h;
      const double y = -1.0 + j * h;
      if (x * x + y * y < 1.0) ++inside;
    }
  }
  CHECK(g->interior_nodes().size() == inside);
  const double ratio = static_cast<double>(g->interior_nodes().size() + g->boundary_nodes().size()) /
                       static_cast<double>(g->size());
  CHECK(std::abs(ratio - kPi / 4.0) / (kPi / 4.0) < 0.02);
}

TEST_CASE("classification invariants") {
  for (const auto& spec : {DomainSpec::interval(-2, 3), DomainSpec::rectangle(0, 2, 0, 1), DomainSpec::disk({0.3, -0.2}, 0.7)}) {
    const GridPtr g = build_grid(spec, 41);
    std::size_t counted = 0;
    for (std::size_t k = 0; k < g->size(); ++k) {
      const NodeClass c = g->node_class(k);
      counted += (c == NodeClass::Interior) + (c == NodeClass::Boundary) + (c == NodeClass::Exterior);
    }
    CHECK(counted == g->size());
    for (std::size_t k : g->interior_nodes()) {
      const int i = g->ix(k);
      const int j = g->iy(k);
      REQUIRE(i > 0);
      REQUIRE(i < g->nx() - 1);
      CHECK(g->in_domain(g->index(i - 1, j)));
      CHECK(g->in_domain(g->index(i + 1, j)));
      if (g->dimension() == 2) {
        CHECK(g->in_domain(g->index(i, j - 1)));
        CHECK(g->in_domain(g->index(i, j + 1)));
      }
    }
    // every boundary node touches the interior
    for (std::size_t k : g->boundary_nodes()) {
      bool touches = false;
      const int i = g->ix(k);
      const int j = g->iy(k);
      const int di[] = {1, -1, 0, 0};
      const int dj[] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        const int a = i + di[d];
        const int b = j + dj[d];
        if (a >= 0 && a < g->nx() && b >= 0 && b < g->ny()) touches = touches || g->is_interior(g->index(a, b));
      }
      const bool corner = g->domain().kind == DomainKind::Rectangle;
      CHECK((touches || corner));
    }
  }
}

TEST_CASE("disk mask is symmetric under reflections") {
  const GridPtr g = build_grid(DomainSpec::disk({0, 0}, 1.0), 64);
  const int n = g->nx();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const NodeClass c = g->node_class(g->index(i, j));
      CHECK(c == g->node_class(g->index(n - 1 - i, j)));
      CHECK(c == g->node_class(g->index(i, n - 1 - j)));
      CHECK(c == g->node_class(g->index(j, i)));
    }
  }
}

TEST_CASE("boundary points cover every boundary node once") {
  for (const auto& spec : {DomainSpec::interval(0, 1), DomainSpec::rectangle(-1, 1, -1, 1), DomainSpec::disk({0, 0}, 1)}) {
    const GridPtr g = build_grid(spec, 101);
    const auto pts = boundary_points(*g);
    std::vector<std::size_t> nodes;
    for (const auto& p : pts) nodes.push_back(p.node);
    std::vector<std::size_t> sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    const auto b = g->boundary_nodes();
    CHECK(std::vector<std::size_t>(b.begin(), b.end()) == sorted);
  }
}

TEST_CASE("interval boundary points are left then right") {
  const GridPtr g = build_grid(DomainSpec::interval(0, 1), 11);
  const auto pts = boundary_points(*g);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].side == BoundarySide::Left);
  CHECK(pts[1].side == BoundarySide::Right);
}

TEST_CASE("rectangle corners belong to the first side in bottom, right, top, left order") {
  const GridPtr g = build_grid(DomainSpec::rectangle(0, 1, 0, 1), 5);
  const auto pts = boundary_points(*g);
  auto side_of = [&](int i, int j) {
    for (const auto& p : pts) {
      if (p.node == g->index(i, j)) return p.side;
    }
    FAIL("corner missing");
    return BoundarySide::Circle;
  };
  CHECK(side_of(0, 0) == BoundarySide::Bottom);
  CHECK(side_of(4, 0) == BoundarySide::Bottom);
  CHECK(side_of(4, 4) == BoundarySide::Right);
  CHECK(side_of(0, 4) == BoundarySide::Top);
}

TEST_CASE("disk boundary angles are sorted, distinct and in [0, 2pi)") {
  const GridPtr g = build_grid(DomainSpec::disk({0, 0}, 1), 101);
  const auto pts = boundary_points(*g);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(pts[k].parameter >= 0.0);
    CHECK(pts[k].parameter < 2.0 * kPi);
    if (k > 0) CHECK(pts[k].parameter > pts[k - 1].parameter);
    CHECK(std::hypot(pts[k].position.x, pts[k].position.y) == doctest::Approx(1.0));
  }
}

TEST_CASE("boundary parameter round-trips to the node within one spacing") {
  for (const auto& spec : {DomainSpec::rectangle(-1, 2, 0, 1), DomainSpec::disk({1, 1}, 2)}) {
    const GridPtr g = build_grid(spec, 61);
    for (const auto& p : boundary_points(*g)) {
      const Point q = boundary_position(*g, p.side, p.parameter);
      const Point node = g->position(p.node);
      CHECK(std::hypot(q.x - node.x, q.y - node.y) <= std::max(g->hx(), g->hy()) + 1e-12);
    }
  }
}

TEST_CASE("mask export") {
  const GridPtr g = build_grid(DomainSpec::rectangle(0, 1, 0, 2), 3, 4);
  std::ostringstream out;
  g->write_mask(out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "# dims=3,4 h=0.5,0.66666666666666663 origin=0,0");
  std::string row;
  std::getline(in, row);
  CHECK(row == "BBB");
  std::getline(in, row);
  CHECK(row == "BIB");
}

TEST_CASE("degenerate domains are rejected") {
  CHECK_THROWS_AS(build_grid(DomainSpec::interval(1, 1), 5), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(DomainSpec::rectangle(0, 1, 2, 2), 5), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(DomainSpec::disk({0, 0}, 0.0), 5), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(DomainSpec::interval(0, 1), 2), std::invalid_argument);
}
