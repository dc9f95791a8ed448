#include "segsolve/grid.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace segsolve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> uniform_axis(double a, double b, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[i] = std::lerp(a, b, static_cast<double>(i) / (n - 1));
  return xs;
}

// Offsets are symmetric about the centre so that mirrored nodes have
// bitwise-negated coordinates.
std::vector<double> centred_axis(double centre, double h, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[i] = centre + (0.5 * (2 * i - (n - 1))) * h;
  return xs;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DomainSpec DomainSpec::interval(double a, double b) {
  DomainSpec d;
  d.kind = DomainKind::Interval;
  d.xmin = a;
  d.xmax = b;
  return d;
}

DomainSpec DomainSpec::rectangle(double a, double b, double c, double d) {
  DomainSpec s;
  s.kind = DomainKind::Rectangle;
  s.xmin = a;
  s.xmax = b;
  s.ymin = c;
  s.ymax = d;
  return s;
}

DomainSpec DomainSpec::disk(Point center, double radius) {
  DomainSpec d;
  d.kind = DomainKind::Disk;
  d.center = center;
  d.radius = radius;
  d.xmin = center.x - radius;
  d.xmax = center.x + radius;
  d.ymin = center.y - radius;
  d.ymax = center.y + radius;
  return d;
}

Grid::Grid(const DomainSpec& domain, int nx, int ny) : domain_(domain), nx_(nx), ny_(ny) {
  if (nx < 3 || (domain.kind != DomainKind::Interval && ny < 3)) {
    throw std::invalid_argument("grid needs at least 3 nodes per axis");
  }
  switch (domain.kind) {
    case DomainKind::Interval:
      if (!(domain.xmax > domain.xmin)) throw std::invalid_argument("degenerate interval: need b > a");
      ny_ = 1;
      break;
    case DomainKind::Rectangle:
      if (!(domain.xmax > domain.xmin) || !(domain.ymax > domain.ymin)) {
        throw std::invalid_argument("degenerate rectangle: need b > a and d > c");
      }
      break;
    case DomainKind::Disk:
      if (!(domain.radius > 0.0) || !std::isfinite(domain.radius)) {
        throw std::invalid_argument("degenerate disk: need radius > 0");
      }
      break;
  }

  if (domain.kind == DomainKind::Disk) {
    hx_ = 2.0 * domain.radius / (nx_ - 1);
    hy_ = 2.0 * domain.radius / (ny_ - 1);
    xs_ = centred_axis(domain.center.x, hx_, nx_);
    ys_ = centred_axis(domain.center.y, hy_, ny_);
  } else {
    hx_ = (domain.xmax - domain.xmin) / (nx_ - 1);
    xs_ = uniform_axis(domain.xmin, domain.xmax, nx_);
    if (domain.kind == DomainKind::Rectangle) {
      hy_ = (domain.ymax - domain.ymin) / (ny_ - 1);
      ys_ = uniform_axis(domain.ymin, domain.ymax, ny_);
    } else {
      hy_ = 0.0;
      ys_ = {0.0};
    }
  }

  const std::size_t total = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  classes_.assign(total, NodeClass::Exterior);

  if (domain.kind == DomainKind::Interval) {
    for (int i = 0; i < nx_; ++i) {
      classes_[index(i)] = (i == 0 || i == nx_ - 1) ? NodeClass::Boundary : NodeClass::Interior;
    }
  } else if (domain.kind == DomainKind::Rectangle) {
    for (int j = 0; j < ny_; ++j) {
      for (int i = 0; i < nx_; ++i) {
        const bool edge = i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
        classes_[index(i, j)] = edge ? NodeClass::Boundary : NodeClass::Interior;
      }
    }
  } else {
    const double r2 = domain.radius * domain.radius;
    std::vector<char> inside(total, 0);
    for (int j = 0; j < ny_; ++j) {
      const double dy = (0.5 * (2 * j - (ny_ - 1))) * hy_;
      for (int i = 0; i < nx_; ++i) {
        const double dx = (0.5 * (2 * i - (nx_ - 1))) * hx_;
        inside[index(i, j)] = (dx * dx + dy * dy < r2) ? 1 : 0;
      }
    }
    for (int j = 0; j < ny_; ++j) {
      for (int i = 0; i < nx_; ++i) {
        const std::size_t k = index(i, j);
        if (inside[k]) {
          classes_[k] = NodeClass::Interior;
          continue;
        }
        const bool touches = (i > 0 && inside[index(i - 1, j)]) || (i + 1 < nx_ && inside[index(i + 1, j)]) ||
                             (j > 0 && inside[index(i, j - 1)]) || (j + 1 < ny_ && inside[index(i, j + 1)]);
        if (touches) classes_[k] = NodeClass::Boundary;
      }
    }
  }

  for (std::size_t k = 0; k < total; ++k) {
    if (classes_[k] == NodeClass::Interior) interior_.push_back(k);
    if (classes_[k] == NodeClass::Boundary) boundary_.push_back(k);
    if (classes_[k] != NodeClass::Exterior) domain_nodes_.push_back(k);
  }
  if (interior_.empty()) throw std::invalid_argument("grid has no interior nodes");
}

void Grid::write_mask(std::ostream& out) const {
  out << "# dims=" << nx_;
  if (dimension() == 2) out << "," << ny_;
  out << " h=" << fmt17(hx_);
  if (dimension() == 2) out << "," << fmt17(hy_);
  out << " origin=" << fmt17(xs_.front());
  if (dimension() == 2) out << "," << fmt17(ys_.front());
  out << "\n";
  std::string row(static_cast<std::size_t>(nx_), ' ');
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) row[i] = to_char(classes_[index(i, j)]);
    out << row << "\n";
  }
}

GridPtr build_grid(const DomainSpec& domain, int n) { return build_grid(domain, n, n); }

GridPtr build_grid(const DomainSpec& domain, int nx, int ny) {
  return std::make_shared<const Grid>(domain, nx, domain.kind == DomainKind::Interval ? 1 : ny);
}

char to_char(NodeClass c) {
  switch (c) {
    case NodeClass::Interior: return 'I';
    case NodeClass::Boundary: return 'B';
    case NodeClass::Exterior: return 'E';
  }
  return '?';
}

double polar_angle(const Grid& grid, Point p) {
  const auto& d = grid.domain();
  Point c = d.center;
  if (d.kind == DomainKind::Rectangle) c = {0.5 * (d.xmin + d.xmax), 0.5 * (d.ymin + d.ymax)};
  if (d.kind == DomainKind::Interval) return 0.0;
  double theta = std::atan2(p.y - c.y, p.x - c.x);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta = 0.0;
  return theta;
}

std::vector<BoundaryPoint> boundary_points(const Grid& grid) {
  std::vector<BoundaryPoint> points;
  const auto& d = grid.domain();
  switch (d.kind) {
    case DomainKind::Interval: {
      points.push_back({grid.index(0), grid.position(grid.index(0)), BoundarySide::Left, 0.0});
      const std::size_t last = grid.index(grid.nx() - 1);
      points.push_back({last, grid.position(last), BoundarySide::Right, 0.0});
      break;
    }
    case DomainKind::Rectangle: {
      const int nx = grid.nx();
      const int ny = grid.ny();
      auto add = [&](int i, int j, BoundarySide side, double s) {
        const std::size_t k = grid.index(i, j);
        points.push_back({k, grid.position(k), side, s});
      };
      for (int i = 0; i < nx; ++i) add(i, 0, BoundarySide::Bottom, grid.position(grid.index(i, 0)).x - d.xmin);
      for (int j = 1; j < ny; ++j) add(nx - 1, j, BoundarySide::Right, grid.position(grid.index(nx - 1, j)).y - d.ymin);
      for (int i = nx - 2; i >= 0; --i) add(i, ny - 1, BoundarySide::Top, d.xmax - grid.position(grid.index(i, ny - 1)).x);
      for (int j = ny - 2; j >= 1; --j) add(0, j, BoundarySide::Left, d.ymax - grid.position(grid.index(0, j)).y);
      break;
    }
    case DomainKind::Disk: {
      for (std::size_t k : grid.boundary_nodes()) {
        const Point p = grid.position(k);
        const double dx = p.x - d.center.x;
        const double dy = p.y - d.center.y;
        const double dist = std::hypot(dx, dy);
        const Point proj{d.center.x + d.radius * dx / dist, d.center.y + d.radius * dy / dist};
        points.push_back({k, proj, BoundarySide::Circle, polar_angle(grid, p)});
      }
      std::stable_sort(points.begin(), points.end(), [](const BoundaryPoint& a, const BoundaryPoint& b) {
        return a.parameter < b.parameter;
      });
      break;
    }
  }
  return points;
}

Point boundary_position(const Grid& grid, BoundarySide side, double parameter) {
  const auto& d = grid.domain();
  switch (side) {
    case BoundarySide::Circle:
      return {d.center.x + d.radius * std::cos(parameter), d.center.y + d.radius * std::sin(parameter)};
    case BoundarySide::Bottom: return {d.xmin + parameter, d.ymin};
    case BoundarySide::Right: return {d.xmax, d.ymin + parameter};
    case BoundarySide::Top: return {d.xmax - parameter, d.ymax};
    case BoundarySide::Left:
      if (d.kind == DomainKind::Interval) return {d.xmin, 0.0};
      return {d.xmin, d.ymax - parameter};
  }
  return {};
}

}  // namespace segsolve
