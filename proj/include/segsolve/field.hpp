#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "segsolve/grid.hpp"

namespace segsolve {

/// One real value per grid node. Exterior nodes hold 0.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, double fill = 0.0);
  ScalarField(GridPtr grid, std::vector<double> values);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator[](std::size_t node) const noexcept { return values_[node]; }
  double& operator[](std::size_t node) noexcept { return values_[node]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Largest value over interior and boundary nodes.
  double max_value() const;
  double min_value() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

using FieldTuple = std::vector<ScalarField>;

/// Sup norm of a - b over domain nodes. Both fields must share a grid.
double max_abs_difference(const ScalarField& a, const ScalarField& b);
double max_abs_difference(const FieldTuple& a, const FieldTuple& b);

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

}  // namespace segsolve
