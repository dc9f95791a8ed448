#include <doctest.h>

#include "support.hpp"

using namespace test;

TEST_CASE("discrete norms") {
  const GridPtr g = unit_interval(1001);
  CHECK(norm_Lp(ScalarField(g, 1.0), 2.0) == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(norm_Lp(ScalarField(g, 0.0), 3.0) == 0.0);
  CHECK(norm_Lp(ScalarField(g, 0.0), kInfinity) == 0.0);
  ScalarField x(g);
  for (std::size_t k : g->domain_nodes()) x[k] = x_of(*g, k);
  // midpoint sum over all nodes: O(h) from the half-weight endpoints
  CHECK(norm_Lp(x, 3.0) == doctest::Approx(std::cbrt(0.25)).epsilon(2e-3));
  CHECK(norm_Lp(x, kInfinity) == 1.0);
  CHECK_THROWS_AS(norm_Lp(x, 0.5), std::invalid_argument);
}

TEST_CASE("segregation residual") {
  const Problem p = shipped("square_m4", 41);
  const LimitResult l = solve_limit(p);
  const SegregationResidual rl = segregation_residual(l.fields, p.weights, p.alpha);
  CHECK(rl.max_product == 0.0);
  for (double v : rl.reaction_integrals) CHECK(v == 0.0);

  const IterationState u0 = EpsilonSolver(p, 1.0).initialize();
  CHECK(segregation_residual(u0.current, p.weights).max_product > 0.0);

  const Problem line = line_m2(201);
  const SolveResult a = solve_epsilon(line, 1e-4);
  const SolveResult b = solve_epsilon(line, 1e-6);
  const SegregationResidual ra = segregation_residual(a.fields, line.weights);
  const SegregationResidual rb = segregation_residual(b.fields, line.weights);
  CHECK(rb.max_product < ra.max_product);
  CHECK(rb.reaction_integrals[0] < ra.reaction_integrals[0]);
}

TEST_CASE("interfaces of the 1D limits") {
  const Problem p2 = line_m2(401);
  const LimitResult l2 = solve_limit(p2);
  const InterfaceSet s2 = extract_supports_and_interfaces(l2.fields, default_delta(*p2.grid, 1e-10, 1.0));
  REQUIRE(s2.pairs.size() == 1);
  REQUIRE(s2.pairs[0].edges.size() == 1);
  const auto& e = s2.pairs[0].edges[0];
  const double xa = x_of(*p2.grid, e.a);
  const double xb = x_of(*p2.grid, e.b);
  CHECK(std::min(xa, xb) <= 0.5);
  CHECK(std::max(xa, xb) >= 0.5);
  CHECK(std::abs(e.normal.x) == doctest::Approx(1.0));
  CHECK_FALSE(s2.degenerate);

  const Problem p3 = line_m3(401);
  const InterfaceSet s3 = extract_supports_and_interfaces(solve_limit(p3).fields, default_delta(*p3.grid, 1e-10, 1.0));
  REQUIRE(s3.pairs.size() == 3);
  for (const auto& pair : s3.pairs) {
    REQUIRE_FALSE(pair.edges.empty());
    for (const auto& edge : pair.edges) CHECK(std::abs(edge.midpoint.x - 0.5) <= 2.0 * p3.grid->hx());
  }
}

TEST_CASE("all-zero limit is flagged degenerate") {
  const Problem p = make(unit_interval(21), {datum(0, {}), datum(1, {})});
  const InterfaceSet s = extract_supports_and_interfaces(solve_limit(p).fields, 1e-3);
  CHECK(s.degenerate);
  CHECK(s.zero_set_size(0) == p.grid->domain_nodes().size());
}

TEST_CASE("Laplacian measure at kinks") {
  const GridPtr g = unit_interval(401);
  ScalarField a(g), b(g), c(g);
  for (std::size_t k : g->domain_nodes()) {
    const double x = x_of(*g, k);
    a[k] = std::max(1.0 - 2.0 * x, 0.0);
    b[k] = std::abs(x - 0.5);
    c[k] = 3.0 - x;
  }
  const std::size_t mid = 200;
  CHECK(laplacian_measure(a)[mid] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(laplacian_measure(b)[mid] == doctest::Approx(2.0).epsilon(1e-9));
  const ScalarField mc = laplacian_measure(c);
  for (std::size_t k : g->interior_nodes()) CHECK(std::abs(mc[k]) < 1e-10);
  for (std::size_t k : g->interior_nodes()) {
    if (k != mid) CHECK(std::abs(laplacian_measure(b)[k]) < 1e-9);
  }
}

TEST_CASE("Laplacian measure concentrates on the 1D interfaces") {
  for (auto problem : {line_m2(401), line_m3(401)}) {
    const LimitResult l = solve_limit(problem);
    const InterfaceSet s = extract_supports_and_interfaces(l.fields, default_delta(*problem.grid, 1e-10, 1.0));
    const double h = problem.grid->hx();
    for (const auto& u : l.fields) {
      const ScalarField mu = laplacian_measure(u);
      double total = 0.0;
      double near = 0.0;
      for (std::size_t k : problem.grid->interior_nodes()) {
        CHECK(mu[k] >= -10.0 * 1e-10 / h);
        if (mu[k] <= 0.0) continue;
        total += mu[k];
        const double x = x_of(*problem.grid, k);
        bool close = false;
        for (const auto& pair : s.pairs) {
          for (const auto& e : pair.edges) close = close || std::abs(e.midpoint.x - x) <= 2.0 * h;
        }
        if (close) near += mu[k];
      }
      REQUIRE(total > 0.0);
      CHECK(near / total >= 0.9);
    }
  }
}

TEST_CASE("jump conditions on the 1D three-component limit") {
  const Problem p = line_m3(401);
  const LimitResult l = solve_limit(p);
  const InterfaceSet s = extract_supports_and_interfaces(l.fields, default_delta(*p.grid, 1e-10, 1.0));
  const JumpReport r = jump_condition_check(l, s);
  const JumpPairStats& main = r.pairs[0];
  CHECK(main.i == 0);
  CHECK(main.j == 1);
  CHECK(main.checked == 1);
  CHECK(main.max_condition1 <= 1e-8);
  CHECK(main.max_condition2 <= 1e-8);
  // u3 only vanishes at a point; those pairs have no one-sided region
  CHECK(r.pairs[1].thin);
  CHECK(r.pairs[2].thin);
}

TEST_CASE("jump condition residual decays on a symmetric square problem") {
  auto residual = [](int n) {
    const GridPtr g = build_grid(DomainSpec::rectangle(-1, 1, -1, 1), n);
    const Problem p = make(g, {datum(0, {"side = left: 1 - y^2"}), datum(1, {"side = right: 1 - y^2"})});
    const LimitResult l = solve_limit(p);
    const InterfaceSet s = extract_supports_and_interfaces(l.fields, default_delta(*g, 1e-10, 1.0));
    for (const auto& e : s.pairs[0].edges) CHECK(std::abs(e.midpoint.x) <= g->hx());
    const JumpReport r = jump_condition_check(l, s);
    CHECK(r.pairs[0].checked > 0);
    double worst = 0.0;
    for (const auto& e : r.pairs[0].residuals) {
      if (std::abs(s.pairs[0].edges[e.edge].midpoint.y) <= 0.5) worst = std::max(worst, e.condition1);
    }
    return std::pair(worst, g->hx());
  };
  const auto [r1, h1] = residual(41);
  const auto [r2, h2] = residual(81);
  CHECK(r2 < r1);
  CHECK(r1 <= 5.0 * h1);
  CHECK(r2 <= 5.0 * h2);
}

TEST_CASE("discrete energy") {
  const GridPtr g = unit_interval(401);
  CHECK(discrete_energy({ScalarField(g, 3.0), ScalarField(g, 1.0)}) == 0.0);
  const Problem p = line_m2(401);
  const LimitResult l = solve_limit(p);
  const double limit_energy = discrete_energy(l.fields);
  CHECK(limit_energy == doctest::Approx(4.0).epsilon(1e-9));
  const double e6 = discrete_energy(solve_epsilon(p, 1e-6).fields);
  CHECK(std::abs(e6 - limit_energy) <= 0.2 * limit_energy);
}

TEST_CASE("energy stays bounded and approaches the limit energy as eps decreases") {
  const Problem p = line_m2(401);
  const double limit_energy = discrete_energy(solve_limit(p).fields);
  double previous_gap = kInfinity;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const double e = discrete_energy(solve_epsilon(p, eps).fields);
    CHECK(e <= 2.0 * limit_energy);
    const double gap = std::abs(e - limit_energy);
    CHECK(gap <= previous_gap + 1e-12);
    previous_gap = gap;
  }
}

TEST_CASE("log-log fit") {
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> dist;
  for (double e : eps) dist.push_back(3.0 * std::pow(e, 0.25));
  const LogLogFit f = fit_loglog(eps, dist);
  CHECK(f.slope == doctest::Approx(0.25));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)));
  CHECK(f.residual < 1e-12);
  CHECK_FALSE(f.dropped_largest);

  std::vector<double> polluted = dist;
  polluted[0] *= 5.0;
  const LogLogFit g = fit_loglog(eps, polluted);
  CHECK(g.dropped_largest);
  CHECK(g.slope == doctest::Approx(0.25));

  const LogLogFit one = fit_loglog(std::vector<double>{1e-3}, std::vector<double>{0.1});
  CHECK(std::isnan(one.slope));
}

TEST_CASE("rate study") {
  const Problem p = line_m2(401);
  const LimitResult l = solve_limit(p);
  const auto eps = geometric_ladder(1e-2, 1e-5, 4);
  CHECK(eps[1] == doctest::Approx(1e-3));
  RateOptions serial;
  const RateTable a = rate_study(p, eps, l, serial);
  REQUIRE(a.rows.size() == 8);
  CHECK(a.slope >= 1.0 / 3.0 - 0.1);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].epsilon == eps[k / 2]);
    CHECK(a.rows[k].component == k % 2);
    CHECK(a.rows[k].lmp1_dist >= 0.0);
  }
  RateOptions parallel;
  parallel.threads = 3;
  const RateTable b = rate_study(p, eps, l, parallel);
  for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].lmp1_dist == b.rows[k].lmp1_dist);
  CHECK(a.slope == b.slope);

  const RateTable single = rate_study(p, {1e-3}, l);
  CHECK(single.rows.size() == 2);
  CHECK_FALSE(single.slope_defined());
  CHECK_THROWS_AS(rate_study(p, {1e-3, 1e-2}, l), std::invalid_argument);
}

TEST_CASE("rate study records failed solves") {
  const Problem p = line_m2(101);
  RateOptions opt;
  opt.solver.max_sweeps = 2;
  const RateTable t = rate_study(p, {1e-2, 1e-4}, solve_limit(p), opt);
  for (const auto& row : t.rows) {
    CHECK(row.failed);
    CHECK(std::isnan(row.lmp1_dist));
  }
  CHECK_FALSE(t.slope_defined());
}
