#include <doctest.h>

#include "segsolve/errors.hpp"
#include "support.hpp"

using namespace test;

namespace {

BoundaryPoint circle_point(double theta) {
  return {0, {std::cos(theta), std::sin(theta)}, BoundarySide::Circle, theta};
}

}  // namespace

TEST_CASE("disk data evaluated at given angles") {
  const GridPtr g = build_grid(DomainSpec::disk({0, 0}, 1), 21);
  const SystemConfig cfg = shipped_config("disk_m3");
  const BoundaryDatum& phi1 = cfg.boundary[0];
  CHECK(eval_boundary(phi1, *g, circle_point(kPi / 3)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval_boundary(phi1, *g, circle_point(3 * kPi / 2)) == 0.0);
  // phi_3 wraps through theta = 0
  CHECK(eval_boundary(cfg.boundary[2], *g, circle_point(0.1)) == doctest::Approx(std::abs(std::sin(0.15))));
  CHECK(eval_boundary(cfg.boundary[2], *g, circle_point(kPi)) == 0.0);
}

TEST_CASE("square data evaluated on the right side") {
  const GridPtr g = build_grid(DomainSpec::rectangle(-1, 1, -1, 1), 21);
  const SystemConfig cfg = shipped_config("square_m4");
  const BoundaryPoint p{0, {1.0, 0.0}, BoundarySide::Right, 1.0};
  CHECK(eval_boundary(cfg.boundary[1], *g, p) == 2.0);
  CHECK(eval_boundary(cfg.boundary[0], *g, p) == 0.0);
}

TEST_CASE("first matching piece wins, unmatched points are zero") {
  const GridPtr g = build_grid(DomainSpec::disk({0, 0}, 1), 21);
  const BoundaryDatum d = datum(0, {"theta in [0, pi): 1", "theta in [0, 2*pi): 2"});
  CHECK(eval_boundary(d, *g, circle_point(1.0)) == 1.0);
  CHECK(eval_boundary(d, *g, circle_point(4.0)) == 2.0);
  const BoundaryDatum e = datum(0, {"theta in [0, 1): 1"});
  CHECK(eval_boundary(e, *g, circle_point(2.0)) == 0.0);
}

TEST_CASE("selectors parse and reject malformed text") {
  CHECK(BoundarySelector::parse("all").kind == BoundarySelector::Kind::All);
  CHECK(BoundarySelector::parse("side = top").side == BoundarySide::Top);
  const auto s = BoundarySelector::parse("theta in [pi/2, pi)");
  CHECK(s.lo == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(BoundarySelector::parse("theta in [0, 1]"), ConfigError);
  CHECK_THROWS_AS(BoundarySelector::parse("side = middle"), ConfigError);
  CHECK_THROWS_AS(BoundarySelector::parse("theta in [1, 1)"), ConfigError);
  CHECK_THROWS_AS(BoundaryPiece::parse("all 1"), ConfigError);
  CHECK_FALSE(BoundarySelector::parse("side = top").compatible_with(DomainKind::Disk));
  CHECK_FALSE(BoundarySelector::parse("theta in [0, 1)").compatible_with(DomainKind::Interval));
}

TEST_CASE("negative boundary data is rejected") {
  const GridPtr g = unit_interval(11);
  CHECK_THROWS_AS(make(g, {datum(0, {"side = left: -1"}), datum(1, {"all: 1"})}), ConfigError);
}

TEST_CASE("partial segregation: shipped examples pass at several resolutions") {
  for (int n : {21, 64, 101, 201}) {
    for (const char* name : {"disk_m3", "square_m4", "square_m4_mixed"}) {
      SystemConfig cfg = shipped_config(name);
      cfg.nx = cfg.ny = n;
      const GridPtr g = build_grid(cfg);
      const SegregationReport r = validate_partial_segregation(cfg.boundary, g, 1e-12);
      CHECK_MESSAGE(r.ok(), name << " n=" << n);
    }
  }
}

TEST_CASE("partial segregation: constant data fails everywhere") {
  const GridPtr g = build_grid(DomainSpec::rectangle(0, 1, 0, 1), 11);
  const SegregationReport r =
      validate_partial_segregation({datum(0, {"all: 1"}), datum(1, {"all: 1"}), datum(2, {"all: 1"})}, g);
  CHECK(r.violations.size() == g->boundary_nodes().size());
  CHECK(r.tolerance == doctest::Approx(1e-12));
}

TEST_CASE("coupling condition") {
  const GridPtr g = build_grid(DomainSpec::rectangle(0, 1, 0, 1), 9);
  CHECK(validate_coupling(CouplingWeights::constants(g, {1, 1, 1}), *g).ok());
  CHECK(validate_coupling(CouplingWeights::constants(g, {1, 1, 1, 3}), *g).ok());
  const CouplingReport bad = validate_coupling(CouplingWeights::constants(g, {1, 2}), *g);
  CHECK(bad.violations.size() == g->interior_nodes().size());
  for (const auto& v : bad.violations) CHECK(v.component == 1);
  CHECK_FALSE(validate_coupling(CouplingWeights::constants(g, {0, 1, 1}), *g).ok());
}

TEST_CASE("weights report identical and unit") {
  const GridPtr g = unit_interval(5);
  CHECK(CouplingWeights::constants(g, {1, 1}).unit());
  CHECK(CouplingWeights::constants(g, {2, 2}).identical());
  CHECK_FALSE(CouplingWeights::constants(g, {2, 2}).unit());
  CHECK_FALSE(CouplingWeights::constants(g, {1, 2}).identical());
}

TEST_CASE("problem assembly collects every problem") {
  const GridPtr g = unit_interval(11);
  try {
    make(g, {datum(0, {"all: 1"})}, {1.0, 1.0}, {0.5});
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.problems().size() >= 3);
  }
}

TEST_CASE("max boundary value") {
  CHECK(shipped("square_m4", 21).max_boundary() == doctest::Approx(4.0));
  CHECK(line_m3(11).max_boundary() == 1.0);
}
