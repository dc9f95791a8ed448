#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace segsolve {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class NodeClass : std::uint8_t { Interior, Boundary, Exterior };

enum class DomainKind { Interval, Rectangle, Disk };

struct DomainSpec {
  DomainKind kind = DomainKind::Interval;
  // interval: [xmin, xmax]; rectangle: [xmin, xmax] x [ymin, ymax]
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 0.0;
  Point center{};
  double radius = 0.0;

  static DomainSpec interval(double a, double b);
  static DomainSpec rectangle(double a, double b, double c, double d);
  static DomainSpec disk(Point center, double radius);
};

/// Which part of the boundary a node belongs to. Rectangle corners are
/// assigned to the first side in the order Bottom, Right, Top, Left.
enum class BoundarySide { Left, Right, Bottom, Top, Circle };

struct BoundaryPoint {
  std::size_t node = 0;
  Point position{};
  BoundarySide side = BoundarySide::Left;
  // Circle: angle in [0, 2*pi). Rectangle: arclength from the side's start
  // in counter-clockwise traversal. Interval: 0.
  double parameter = 0.0;
};

/// Structured 1D or 2D lattice with an interior/boundary/exterior mask.
///
/// Nodes are stored row-major: index = j * nx + i, with i along x. Disk grids
/// cover the bounding box of the circle; a node is Interior iff it lies
/// strictly inside the circle, Boundary iff it is outside (or on) the circle
/// with at least one interior 4-neighbour, and Exterior otherwise. Grids are
/// immutable after construction.
class Grid {
 public:
  Grid(const DomainSpec& domain, int nx, int ny);

  const DomainSpec& domain() const noexcept { return domain_; }
  int dimension() const noexcept { return domain_.kind == DomainKind::Interval ? 1 : 2; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return classes_.size(); }
  double hx() const noexcept { return hx_; }
  double hy() const noexcept { return hy_; }
  double min_spacing() const noexcept { return dimension() == 1 ? hx_ : std::min(hx_, hy_); }
  /// Midpoint-rule weight of one node: h in 1D, hx*hy in 2D.
  double cell_volume() const noexcept { return dimension() == 1 ? hx_ : hx_ * hy_; }
  Point origin() const noexcept { return {xs_.front(), ys_.front()}; }

  std::size_t index(int i, int j = 0) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }
  int ix(std::size_t node) const noexcept { return static_cast<int>(node % static_cast<std::size_t>(nx_)); }
  int iy(std::size_t node) const noexcept { return static_cast<int>(node / static_cast<std::size_t>(nx_)); }
  Point position(std::size_t node) const noexcept { return {xs_[ix(node)], ys_[iy(node)]}; }

  NodeClass node_class(std::size_t node) const noexcept { return classes_[node]; }
  bool is_interior(std::size_t node) const noexcept { return classes_[node] == NodeClass::Interior; }
  bool in_domain(std::size_t node) const noexcept { return classes_[node] != NodeClass::Exterior; }
  std::span<const NodeClass> classes() const noexcept { return classes_; }

  std::span<const std::size_t> interior_nodes() const noexcept { return interior_; }
  std::span<const std::size_t> boundary_nodes() const noexcept { return boundary_; }
  /// Interior and boundary nodes, ascending.
  std::span<const std::size_t> domain_nodes() const noexcept { return domain_nodes_; }

  /// Writes `# dims=.. h=.. origin=..` followed by one class character per
  /// node (I, B, E), one grid row per line.
  void write_mask(std::ostream& out) const;

 private:
  DomainSpec domain_;
  int nx_ = 0;
  int ny_ = 1;
  double hx_ = 0.0;
  double hy_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<NodeClass> classes_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> domain_nodes_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds a grid with `n` nodes per axis. Throws std::invalid_argument for
/// n < 3 or a zero-measure domain.
GridPtr build_grid(const DomainSpec& domain, int n);
GridPtr build_grid(const DomainSpec& domain, int nx, int ny);

/// Every boundary node exactly once: interval (left, right); rectangle in
/// counter-clockwise order bottom, right, top, left; disk sorted by angle.
std::vector<BoundaryPoint> boundary_points(const Grid& grid);

/// Inverse of the boundary parameterisation.
Point boundary_position(const Grid& grid, BoundarySide side, double parameter);

/// Polar angle of `p` about the domain centre, in [0, 2*pi).
double polar_angle(const Grid& grid, Point p);

char to_char(NodeClass c);

}  // namespace segsolve
