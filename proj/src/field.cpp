#include "segsolve/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace segsolve {

namespace {

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid_ptr() != b.grid_ptr()) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

ScalarField::ScalarField(GridPtr grid, double fill) : grid_(std::move(grid)), values_(grid_->size(), fill) {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!grid_->in_domain(k)) values_[k] = 0.0;
  }
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw std::invalid_argument("field size does not match grid");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!grid_->in_domain(k)) values_[k] = 0.0;
  }
}

double ScalarField::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k : grid_->domain_nodes()) m = std::max(m, values_[k]);
  return m;
}

double ScalarField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k : grid_->domain_nodes()) m = std::min(m, values_[k]);
  return m;
}

double max_abs_difference(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t k : a.grid().domain_nodes()) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double max_abs_difference(const FieldTuple& a, const FieldTuple& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tuples differ in length");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, max_abs_difference(a[i], b[i]));
  return m;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField out(a.grid_ptr());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  ScalarField out(a.grid_ptr());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

ScalarField operator*(double s, const ScalarField& a) {
  ScalarField out(a.grid_ptr());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = s * a[k];
  return out;
}

}  // namespace segsolve
