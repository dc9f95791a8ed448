#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "segsolve/expression.hpp"
#include "segsolve/field.hpp"
#include "segsolve/grid.hpp"

namespace segsolve {

/// Which boundary points a piece of boundary data applies to.
///
/// Text forms: `all`, `side = left|right|bottom|top`, and
/// `theta in [lo, hi)` (periodic in 2*pi, bounds are constant expressions).
struct BoundarySelector {
  enum class Kind { All, Side, ThetaRange };

  Kind kind = Kind::All;
  BoundarySide side = BoundarySide::Left;
  double lo = 0.0;
  double hi = 0.0;
  std::string source = "all";

  static BoundarySelector parse(std::string_view text);
  bool compatible_with(DomainKind kind) const;
  bool matches(const Grid& grid, const BoundaryPoint& p) const;
};

struct BoundaryPiece {
  BoundarySelector range;
  Expression expr;

  /// Parses `<range>: <expr>`.
  static BoundaryPiece parse(std::string_view text);
};

/// Piecewise boundary data for one component; the first matching piece
/// wins and unmatched points evaluate to 0.
struct BoundaryDatum {
  std::size_t component = 0;
  std::vector<BoundaryPiece> pieces;
};

/// Evaluates the datum at a boundary point. Throws ConfigError for a
/// non-finite or negative value.
double eval_boundary(const BoundaryDatum& datum, const Grid& grid, const BoundaryPoint& p);

/// Tabulates boundary data on the boundary nodes (0 elsewhere).
ScalarField tabulate_boundary(const BoundaryDatum& datum, const GridPtr& grid);
ScalarField tabulate_boundary(const GridPtr& grid, const std::function<double(const BoundaryPoint&)>& f);

/// Coupling weights A_i, one per component, each constant or tabulated.
class CouplingWeights {
 public:
  CouplingWeights() = default;
  static CouplingWeights constants(const GridPtr& grid, const std::vector<double>& values);
  static CouplingWeights tabulated(FieldTuple fields);

  std::size_t size() const noexcept { return fields_.size(); }
  const ScalarField& field(std::size_t i) const { return fields_.at(i); }
  std::optional<double> constant(std::size_t i) const { return constants_.at(i); }
  /// True when every A_i coincides with A_1 at every node.
  bool identical() const;
  /// True when every A_i is the constant 1.
  bool unit() const;

 private:
  FieldTuple fields_;
  std::vector<std::optional<double>> constants_;
};

struct SegregationViolation {
  std::size_t node = 0;
  Point position{};
  double product = 0.0;
};

struct SegregationReport {
  double tolerance = 0.0;
  std::vector<SegregationViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Lists every boundary node where the product of the data exceeds `tol`.
/// A negative `tol` selects the default 1e-12 * M^m.
SegregationReport validate_partial_segregation(const FieldTuple& boundary, double tol = -1.0);
SegregationReport validate_partial_segregation(const std::vector<BoundaryDatum>& data, const GridPtr& grid,
                                               double tol = -1.0);

struct CouplingViolation {
  std::size_t component = 0;
  std::size_t node = 0;
  double value = 0.0;
  double others = 0.0;  // sum of the other weights at the node
};

struct CouplingReport {
  std::vector<CouplingViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks 0 < A_i <= sum_{j != i} A_j at every interior node.
CouplingReport validate_coupling(const CouplingWeights& weights, const Grid& grid);

/// Discrete problem: grid, boundary data, weights and exponents.
struct Problem {
  GridPtr grid;
  FieldTuple boundary;
  CouplingWeights weights;
  std::vector<double> alpha;

  std::size_t components() const noexcept { return boundary.size(); }
  /// M = max_i max_boundary phi_i.
  double max_boundary() const;
  bool unit_exponents() const;
};

/// Assembles a problem; throws ConfigError on negative data, alpha < 1,
/// fewer than two components or mismatched sizes.
Problem make_problem(GridPtr grid, FieldTuple boundary, CouplingWeights weights, std::vector<double> alpha);
Problem make_problem(const GridPtr& grid, const std::vector<BoundaryDatum>& data, CouplingWeights weights,
                     std::vector<double> alpha);

}  // namespace segsolve
