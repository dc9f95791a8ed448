#include "segsolve/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "segsolve/errors.hpp"

namespace segsolve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool consume(std::string_view& s, std::string_view word) {
  s = trim(s);
  if (s.substr(0, word.size()) != word) return false;
  s.remove_prefix(word.size());
  return true;
}

}  // namespace

BoundarySelector BoundarySelector::parse(std::string_view text) {
  BoundarySelector sel;
  sel.source = std::string(trim(text));
  std::string_view rest = text;

  if (consume(rest, "all")) {
    if (!trim(rest).empty()) throw ConfigError("selector \"" + sel.source + "\": trailing text");
    sel.kind = Kind::All;
    return sel;
  }
  if (consume(rest, "side")) {
    if (!consume(rest, "=")) throw ConfigError("selector \"" + sel.source + "\": expected '=' after side");
    const std::string_view name = trim(rest);
    sel.kind = Kind::Side;
    if (name == "left") sel.side = BoundarySide::Left;
    else if (name == "right") sel.side = BoundarySide::Right;
    else if (name == "bottom") sel.side = BoundarySide::Bottom;
    else if (name == "top") sel.side = BoundarySide::Top;
    else throw ConfigError("selector \"" + sel.source + "\": unknown side '" + std::string(name) + "'");
    return sel;
  }
  if (consume(rest, "theta")) {
    if (!consume(rest, "in") || !consume(rest, "[")) {
      throw ConfigError("selector \"" + sel.source + "\": expected 'theta in [lo, hi)'");
    }
    rest = trim(rest);
    if (rest.empty() || rest.back() != ')') {
      throw ConfigError("selector \"" + sel.source + "\": theta ranges are half-open, close with ')'");
    }
    rest.remove_suffix(1);
    int depth = 0;
    std::size_t comma = std::string_view::npos;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] == '(') ++depth;
      else if (rest[i] == ')') --depth;
      else if (rest[i] == ',' && depth == 0) {
        comma = i;
        break;
      }
    }
    if (comma == std::string_view::npos) throw ConfigError("selector \"" + sel.source + "\": expected 'lo, hi'");
    sel.kind = Kind::ThetaRange;
    sel.lo = Expression::constant(rest.substr(0, comma));
    sel.hi = Expression::constant(rest.substr(comma + 1));
    if (!(sel.hi > sel.lo)) throw ConfigError("selector \"" + sel.source + "\": empty theta range");
    return sel;
  }
  throw ConfigError("selector \"" + sel.source + "\": expected 'all', 'side = ...' or 'theta in [lo, hi)'");
}

bool BoundarySelector::compatible_with(DomainKind domain) const {
  switch (kind) {
    case Kind::All: return true;
    case Kind::ThetaRange: return domain != DomainKind::Interval;
    case Kind::Side:
      if (domain == DomainKind::Disk) return false;
      if (domain == DomainKind::Interval) return side == BoundarySide::Left || side == BoundarySide::Right;
      return true;
  }
  return false;
}

bool BoundarySelector::matches(const Grid& grid, const BoundaryPoint& p) const {
  switch (kind) {
    case Kind::All: return true;
    case Kind::Side: return p.side == side;
    case Kind::ThetaRange: {
      const double theta = p.side == BoundarySide::Circle ? p.parameter : polar_angle(grid, p.position);
      const double shift = std::ceil((lo - theta) / kTwoPi);
      const double t = theta + shift * kTwoPi;
      return t >= lo && t < hi;
    }
  }
  return false;
}

BoundaryPiece BoundaryPiece::parse(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("piece \"" + std::string(text) + "\": expected '<range>: <expr>'");
  }
  return {BoundarySelector::parse(text.substr(0, colon)), Expression::parse(text.substr(colon + 1))};
}

double eval_boundary(const BoundaryDatum& datum, const Grid& grid, const BoundaryPoint& p) {
  for (const auto& piece : datum.pieces) {
    if (!piece.range.matches(grid, p)) continue;
    Variables vars;
    vars.x = p.position.x;
    vars.y = p.position.y;
    vars.theta = p.side == BoundarySide::Circle ? p.parameter : polar_angle(grid, p.position);
    vars.s = p.parameter;
    const double v = piece.expr.evaluate(vars);
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << "boundary." << datum.component + 1 << " piece \"" << piece.range.source << ": "
          << piece.expr.source() << "\" evaluates to " << v << " at (" << p.position.x << ", " << p.position.y
          << "); boundary data must be finite and nonnegative";
      throw ConfigError(msg.str());
    }
    return v;
  }
  return 0.0;
}

ScalarField tabulate_boundary(const BoundaryDatum& datum, const GridPtr& grid) {
  for (const auto& piece : datum.pieces) {
    if (!piece.range.compatible_with(grid->domain().kind)) {
      throw ConfigError("boundary." + std::to_string(datum.component + 1) + ": selector \"" + piece.range.source +
                        "\" does not apply to this domain");
    }
  }
  return tabulate_boundary(grid, [&](const BoundaryPoint& p) { return eval_boundary(datum, *grid, p); });
}

ScalarField tabulate_boundary(const GridPtr& grid, const std::function<double(const BoundaryPoint&)>& f) {
  ScalarField out(grid);
  for (const auto& p : boundary_points(*grid)) out[p.node] = f(p);
  return out;
}

CouplingWeights CouplingWeights::constants(const GridPtr& grid, const std::vector<double>& values) {
  CouplingWeights w;
  for (double v : values) {
    w.fields_.emplace_back(grid, v);
    w.constants_.emplace_back(v);
  }
  return w;
}

CouplingWeights CouplingWeights::tabulated(FieldTuple fields) {
  CouplingWeights w;
  w.constants_.assign(fields.size(), std::nullopt);
  w.fields_ = std::move(fields);
  return w;
}

bool CouplingWeights::identical() const {
  for (std::size_t i = 1; i < fields_.size(); ++i) {
    if (constants_[i] && constants_[0]) {
      if (*constants_[i] != *constants_[0]) return false;
      continue;
    }
    for (std::size_t k : fields_[0].grid().domain_nodes()) {
      if (fields_[i][k] != fields_[0][k]) return false;
    }
  }
  return true;
}

bool CouplingWeights::unit() const {
  return std::all_of(constants_.begin(), constants_.end(), [](const auto& c) { return c && *c == 1.0; });
}

SegregationReport validate_partial_segregation(const FieldTuple& boundary, double tol) {
  SegregationReport report;
  if (boundary.size() < 2) throw ConfigError("partial segregation needs at least two components");
  const Grid& grid = boundary.front().grid();
  double big = 0.0;
  for (const auto& f : boundary) {
    for (std::size_t k : grid.boundary_nodes()) big = std::max(big, f[k]);
  }
  report.tolerance = tol >= 0.0 ? tol : 1e-12 * std::pow(big, static_cast<double>(boundary.size()));
  for (std::size_t k : grid.boundary_nodes()) {
    double product = 1.0;
    for (const auto& f : boundary) product *= f[k];
    if (product > report.tolerance) report.violations.push_back({k, grid.position(k), product});
  }
  return report;
}

SegregationReport validate_partial_segregation(const std::vector<BoundaryDatum>& data, const GridPtr& grid,
                                               double tol) {
  FieldTuple fields;
  for (const auto& d : data) fields.push_back(tabulate_boundary(d, grid));
  return validate_partial_segregation(fields, tol);
}

CouplingReport validate_coupling(const CouplingWeights& weights, const Grid& grid) {
  CouplingReport report;
  const std::size_t m = weights.size();
  for (std::size_t k : grid.interior_nodes()) {
    for (std::size_t i = 0; i < m; ++i) {
      const double a = weights.field(i)[k];
      double others = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j != i) others += weights.field(j)[k];
      }
      if (!(a > 0.0) || a > others) report.violations.push_back({i, k, a, others});
    }
  }
  return report;
}

double Problem::max_boundary() const {
  double big = 0.0;
  for (const auto& f : boundary) {
    for (std::size_t k : grid->boundary_nodes()) big = std::max(big, f[k]);
  }
  return big;
}

bool Problem::unit_exponents() const {
  return std::all_of(alpha.begin(), alpha.end(), [](double a) { return a == 1.0; });
}

Problem make_problem(GridPtr grid, FieldTuple boundary, CouplingWeights weights, std::vector<double> alpha) {
  std::vector<std::string> problems;
  const std::size_t m = boundary.size();
  if (m < 2) problems.push_back("system needs m >= 2 components");
  if (weights.size() != m) problems.push_back("expected " + std::to_string(m) + " coupling weights");
  if (alpha.size() != m) problems.push_back("expected " + std::to_string(m) + " exponents");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (!(alpha[i] >= 1.0)) problems.push_back("alpha_" + std::to_string(i + 1) + " must be >= 1");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (boundary[i].grid_ptr() != grid) {
      problems.push_back("boundary data " + std::to_string(i + 1) + " lives on another grid");
      continue;
    }
    for (std::size_t k : grid->boundary_nodes()) {
      const double v = boundary[i][k];
      if (!std::isfinite(v) || v < 0.0) {
        problems.push_back("boundary data " + std::to_string(i + 1) + " is negative or non-finite at node " +
                           std::to_string(k));
        break;
      }
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
  return Problem{std::move(grid), std::move(boundary), std::move(weights), std::move(alpha)};
}

Problem make_problem(const GridPtr& grid, const std::vector<BoundaryDatum>& data, CouplingWeights weights,
                     std::vector<double> alpha) {
  FieldTuple fields;
  for (const auto& d : data) fields.push_back(tabulate_boundary(d, grid));
  return make_problem(grid, std::move(fields), std::move(weights), std::move(alpha));
}

}  // namespace segsolve
