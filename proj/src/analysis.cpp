#include "segsolve/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "segsolve/kernels.hpp"

namespace segsolve {

namespace {

struct Step {
  int di;
  int dj;
};

constexpr Step kSteps[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

std::optional<std::size_t> shifted(const Grid& g, std::size_t node, int di, int dj) {
  const int i = g.ix(node) + di;
  const int j = g.iy(node) + dj;
  if (i < 0 || i >= g.nx() || j < 0 || j >= g.ny()) return std::nullopt;
  const std::size_t k = g.index(i, j);
  if (!g.in_domain(k)) return std::nullopt;
  return k;
}

Step step_between(const Grid& g, std::size_t a, std::size_t b) {
  return {g.ix(b) - g.ix(a), g.iy(b) - g.iy(a)};
}

double spacing(const Grid& g, Step s) { return s.di != 0 ? g.hx() : g.hy(); }

// Central difference where possible, one-sided at the edge of the domain.
double partial(const Grid& g, const ScalarField& u, std::size_t k, int di, int dj) {
  const double h = di != 0 ? g.hx() : g.hy();
  const auto fwd = shifted(g, k, di, dj);
  const auto bwd = shifted(g, k, -di, -dj);
  if (fwd && bwd) return (u[*fwd] - u[*bwd]) / (2.0 * h);
  if (fwd) return (u[*fwd] - u[k]) / h;
  if (bwd) return (u[k] - u[*bwd]) / h;
  return 0.0;
}

void require_tuple(const FieldTuple& fields) {
  if (fields.empty()) throw std::invalid_argument("empty field tuple");
  for (const auto& f : fields) {
    if (f.grid_ptr() != fields.front().grid_ptr()) throw std::invalid_argument("fields must share a grid");
  }
}

}  // namespace

double norm_Lp(const ScalarField& u, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
  const Grid& g = u.grid();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t k : g.domain_nodes()) m = std::max(m, std::abs(u[k]));
    return m;
  }
  double sum = 0.0;
  for (std::size_t k : g.domain_nodes()) sum += std::pow(std::abs(u[k]), p);
  return std::pow(g.cell_volume() * sum, 1.0 / p);
}

SegregationResidual segregation_residual(const FieldTuple& fields, const CouplingWeights& weights,
                                         std::span<const double> alpha) {
  require_tuple(fields);
  const std::size_t m = fields.size();
  const Grid& g = fields.front().grid();
  std::vector<double> ones(m, 1.0);
  if (alpha.empty()) alpha = ones;
  if (alpha.size() != m || weights.size() != m) throw std::invalid_argument("size mismatch");

  SegregationResidual out;
  out.reaction_integrals.assign(m, 0.0);
  for (std::size_t k : g.domain_nodes()) {
    double plain = 1.0;
    double powered = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      plain *= fields[j][k];
      powered *= alpha[j] == 1.0 ? fields[j][k] : std::pow(fields[j][k], alpha[j]);
    }
    out.max_product = std::max(out.max_product, plain);
    for (std::size_t i = 0; i < m; ++i) out.reaction_integrals[i] += weights.field(i)[k] * powered;
  }
  for (double& v : out.reaction_integrals) v *= g.cell_volume();
  return out;
}

double default_delta(const Grid& grid, double tol, double max_boundary) {
  return std::max(10.0 * tol * max_boundary, grid.min_spacing() * max_boundary);
}

const PairInterface& InterfaceSet::pair(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  for (const auto& p : pairs) {
    if (p.i == i && p.j == j) return p;
  }
  throw std::out_of_range("no such interface pair");
}

std::size_t InterfaceSet::zero_set_size(std::size_t i) const {
  return static_cast<std::size_t>(std::count(zero_sets.at(i).begin(), zero_sets.at(i).end(), std::uint8_t{1}));
}

InterfaceSet extract_supports_and_interfaces(const FieldTuple& fields, double delta) {
  require_tuple(fields);
  if (!(delta > 0.0)) throw std::invalid_argument("zero-set threshold must be positive");
  const std::size_t m = fields.size();
  const Grid& g = fields.front().grid();

  InterfaceSet out;
  out.delta = delta;
  out.zero_sets.assign(m, std::vector<std::uint8_t>(g.size(), 0));
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t count = 0;
    for (std::size_t k : g.domain_nodes()) {
      if (fields[i][k] < delta) {
        out.zero_sets[i][k] = 1;
        ++count;
      }
    }
    if (count == g.domain_nodes().size()) out.degenerate = true;
  }

  auto make_edge = [&](const ScalarField& diff, std::size_t a, std::size_t b) {
    InterfaceEdge e;
    e.a = a;
    e.b = b;
    const Point pa = g.position(a);
    const Point pb = g.position(b);
    e.midpoint = {0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    double gx = 0.5 * (partial(g, diff, a, 1, 0) + partial(g, diff, b, 1, 0));
    double gy = g.dimension() == 2 ? 0.5 * (partial(g, diff, a, 0, 1) + partial(g, diff, b, 0, 1)) : 0.0;
    double len = std::hypot(gx, gy);
    if (!(len > 0.0)) {
      gx = pb.x - pa.x;
      gy = pb.y - pa.y;
      len = std::hypot(gx, gy);
    }
    e.normal = {gx / len, gy / len};
    return e;
  };

  const int dirs = g.dimension() == 2 ? 4 : 2;
  const double tie_band = 1e-6 * delta;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto& zi = out.zero_sets[i];
      const auto& zj = out.zero_sets[j];
      const ScalarField diff = fields[i] - fields[j];
      PairInterface pair{i, j, {}};
      auto tied = [&](std::size_t k) { return std::abs(diff[k]) <= tie_band; };
      auto crosses = [&](std::size_t a, std::size_t b) {
        if (!zj[a] || !zi[b]) return false;
        if (diff[a] < -tie_band || diff[b] > tie_band) return false;
        if (tied(a) && tied(b)) return false;
        if (g.node_class(a) == NodeClass::Boundary && tied(a)) return false;
        if (g.node_class(b) == NodeClass::Boundary && tied(b)) return false;
        return true;
      };
      for (std::size_t a : g.domain_nodes()) {
        if (!zj[a]) continue;
        for (int d = 0; d < dirs; ++d) {
          const auto b = shifted(g, a, kSteps[d].di, kSteps[d].dj);
          if (!b || !crosses(a, *b)) continue;
          if (tied(a)) {
            const auto before = shifted(g, a, -kSteps[d].di, -kSteps[d].dj);
            if (before && crosses(*before, a)) continue;
          }
          pair.edges.push_back(make_edge(diff, a, *b));
        }
      }
      out.pairs.push_back(std::move(pair));
    }
  }
  return out;
}

MeetingPoint interface_meeting_point(const InterfaceSet& interfaces, const Grid& grid) {
  std::vector<const PairInterface*> active;
  for (const auto& p : interfaces.pairs) {
    if (!p.edges.empty()) active.push_back(&p);
  }
  MeetingPoint best;
  if (active.empty()) return best;
  for (std::size_t k : grid.domain_nodes()) {
    const Point x = grid.position(k);
    double worst = 0.0;
    for (const auto* p : active) {
      double nearest = kInfinity;
      for (const auto& e : p->edges) nearest = std::min(nearest, std::hypot(e.midpoint.x - x.x, e.midpoint.y - x.y));
      worst = std::max(worst, nearest);
      if (worst >= best.radius) break;
    }
    if (worst < best.radius) {
      best.radius = worst;
      best.node = k;
      best.position = x;
    }
  }
  return best;
}

ScalarField laplacian_measure(const ScalarField& u) {
  ScalarField out = apply_laplacian(u);
  const double h = u.grid().min_spacing();
  for (std::size_t k : u.grid().interior_nodes()) out[k] *= h;
  return out;
}

JumpReport jump_condition_check(const FieldTuple& fields, const InterfaceSet& interfaces) {
  require_tuple(fields);
  const Grid& g = fields.front().grid();
  const std::size_t m = fields.size();
  const int dirs = g.dimension() == 2 ? 4 : 2;
  auto has_interior = [&](const std::vector<std::uint8_t>& z) {
    for (std::size_t k : g.interior_nodes()) {
      if (!z[k]) continue;
      bool inside = true;
      for (int d = 0; d < dirs && inside; ++d) {
        const auto nb = shifted(g, k, kSteps[d].di, kSteps[d].dj);
        inside = nb && z[*nb];
      }
      if (inside) return true;
    }
    return false;
  };
  std::vector<bool> thick;
  for (const auto& z : interfaces.zero_sets) thick.push_back(has_interior(z));

  JumpReport report;
  for (const auto& pair : interfaces.pairs) {
    const std::size_t i = pair.i;
    const std::size_t j = pair.j;
    const auto& zi = interfaces.zero_sets[i];
    const auto& zj = interfaces.zero_sets[j];
    JumpPairStats stats;
    stats.i = i;
    stats.j = j;
    if (!thick[i] || !thick[j]) {
      stats.thin = true;
      stats.skipped = pair.edges.size();
      report.skipped += stats.skipped;
      report.pairs.push_back(std::move(stats));
      continue;
    }
    for (std::size_t e = 0; e < pair.edges.size(); ++e) {
      const auto& edge = pair.edges[e];
      const Step s = step_between(g, edge.a, edge.b);
      const auto before = shifted(g, edge.a, -s.di, -s.dj);
      const auto after = shifted(g, edge.b, s.di, s.dj);
      if (!before || !after || !zj[*before] || !zi[*after]) {
        ++stats.skipped;
        continue;
      }
      const double h = spacing(g, s);
      const std::size_t a = edge.a;
      const std::size_t b = edge.b;
      const double ui_j = (fields[i][a] - fields[i][*before]) / h;
      const double uj_i = (fields[j][*after] - fields[j][b]) / h;
      JumpEdgeResidual r;
      r.edge = e;
      r.condition1 = std::abs(ui_j + uj_i);
      for (std::size_t k = 0; k < m; ++k) {
        if (k == i || k == j) continue;
        const double left = (fields[k][a] - fields[k][*before]) / h;
        const double right = (fields[k][*after] - fields[k][b]) / h;
        r.condition2 = std::max(r.condition2, std::abs(left - right - ui_j));
      }
      stats.max_condition1 = std::max(stats.max_condition1, r.condition1);
      stats.max_condition2 = std::max(stats.max_condition2, r.condition2);
      stats.residuals.push_back(r);
      ++stats.checked;
    }
    report.skipped += stats.skipped;
    report.max_condition1 = std::max(report.max_condition1, stats.max_condition1);
    report.max_condition2 = std::max(report.max_condition2, stats.max_condition2);
    report.pairs.push_back(std::move(stats));
  }
  return report;
}

JumpReport jump_condition_check(const LimitResult& limit, const InterfaceSet& interfaces) {
  return jump_condition_check(limit.fields, interfaces);
}

double discrete_energy(const FieldTuple& fields) {
  double total = 0.0;
  for (const auto& u : fields) {
    const Grid& g = u.grid();
    double sum = 0.0;
    for (std::size_t k : g.domain_nodes()) {
      if (const auto r = shifted(g, k, 1, 0)) {
        const double d = (u[*r] - u[k]) / g.hx();
        sum += d * d;
      }
      if (g.dimension() == 2) {
        if (const auto t = shifted(g, k, 0, 1)) {
          const double d = (u[*t] - u[k]) / g.hy();
          sum += d * d;
        }
      }
    }
    total += sum * g.cell_volume();
  }
  return total;
}

HarmonicBounds harmonic_bounds(const Problem& problem, EllipticSolver& solver) {
  HarmonicBounds out;
  const std::size_t m = problem.components();
  for (std::size_t i = 0; i < m; ++i) {
    out.upper.push_back(solver.harmonic(problem.boundary[i]).field);
    ScalarField data = problem.boundary[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) data = data - problem.boundary[j];
    }
    out.lower.push_back(solver.harmonic(data).field);
  }
  return out;
}

FieldTuple hat_fields(const FieldTuple& fields) {
  FieldTuple out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    ScalarField v = fields[i];
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j != i) v = v - fields[j];
    }
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

struct LineFit {
  double slope;
  double intercept;
  double residual;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - (f.slope * x[k] + f.intercept);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

}  // namespace

LogLogFit fit_loglog(std::span<const double> eps, std::span<const double> dist, double drop_threshold) {
  if (eps.size() != dist.size()) throw std::invalid_argument("size mismatch");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (eps[k] > 0.0 && dist[k] > 0.0 && std::isfinite(dist[k])) pts.emplace_back(std::log(eps[k]), std::log(dist[k]));
  }
  LogLogFit out;
  if (pts.size() < 2) return out;
  std::sort(pts.begin(), pts.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
  auto fit = [&](std::size_t from) {
    std::vector<double> x, y;
    for (std::size_t k = from; k < pts.size(); ++k) {
      x.push_back(pts[k].first);
      y.push_back(pts[k].second);
    }
    return least_squares(x, y);
  };
  LineFit f = fit(0);
  if (f.residual > drop_threshold && pts.size() >= 3) {
    f = fit(1);
    out.dropped_largest = true;
  }
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.residual = f.residual;
  return out;
}

RateTable rate_study(const Problem& problem, const std::vector<double>& epsilons, const LimitResult& limit,
                     const RateOptions& options) {
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0)) throw std::invalid_argument("epsilon values must be positive");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) throw std::invalid_argument("epsilon values must strictly decrease");
  }
  const std::size_t m = problem.components();
  if (limit.fields.size() != m) throw std::invalid_argument("limit has the wrong number of components");
  const double p = static_cast<double>(m + 1);

  RateTable table;
  table.epsilons = epsilons;
  table.pivot = limit.pivot;
  table.rows.resize(epsilons.size() * m);

  const auto count = static_cast<std::ptrdiff_t>(epsilons.size());
  const int threads = std::max(1, options.threads);
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::ptrdiff_t e = 0; e < count; ++e) {
    const auto idx = static_cast<std::size_t>(e);
    const double eps = epsilons[idx];
    try {
      EpsilonSolver solver(problem, eps, options.solver);
      const SolveResult r = solver.solve();
      for (std::size_t i = 0; i < m; ++i) {
        const ScalarField diff = r.fields[i] - limit.fields[i];
        table.rows[idx * m + i] = {eps, i, norm_Lp(diff, p), norm_Lp(diff, kInfinity), false, {}};
      }
    } catch (const std::exception& ex) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t i = 0; i < m; ++i) table.rows[idx * m + i] = {eps, i, nan, nan, true, ex.what()};
    }
  }

  std::vector<double> eps_fit, dist_fit;
  for (const auto& row : table.rows) {
    if (row.component == limit.pivot && !row.failed) {
      eps_fit.push_back(row.epsilon);
      dist_fit.push_back(row.lmp1_dist);
    }
  }
  const LogLogFit fit = fit_loglog(eps_fit, dist_fit, options.drop_threshold);
  table.slope = fit.slope;
  table.intercept = fit.intercept;
  table.fit_residual = fit.residual;
  table.dropped_largest = fit.dropped_largest;
  return table;
}

std::vector<double> geometric_ladder(double start, double stop, std::size_t count) {
  if (!(start > 0.0) || !(stop > 0.0)) throw std::invalid_argument("ladder bounds must be positive");
  if (count == 0) throw std::invalid_argument("ladder needs at least one point");
  if (count == 1) return {start};
  std::vector<double> out(count);
  const double ls = std::log10(start);
  const double le = std::log10(stop);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::pow(10.0, ls + (le - ls) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  return out;
}

}  // namespace segsolve
