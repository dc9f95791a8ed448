#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "segsolve/analysis.hpp"
#include "segsolve/field.hpp"

namespace segsolve::io {

/// %.17g, so values round-trip exactly.
std::string format(double v);

/// Header `x[,y],<prefix>1,...,<prefix>m`, one row per domain node in
/// row-major order.
void write_fields(std::ostream& out, const FieldTuple& fields, const std::string& prefix = "u");

struct FieldTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
/// Reads back what write_fields wrote.
FieldTable read_fields(std::istream& in);

void write_zero_sets(std::ostream& out, const InterfaceSet& interfaces, const Grid& grid);
/// One row per interface edge: `i,j,x[,y],normal_x[,normal_y]` at the midpoint.
void write_interfaces(std::ostream& out, const InterfaceSet& interfaces, const Grid& grid);
void write_jump_report(std::ostream& out, const JumpReport& report, const InterfaceSet& interfaces, const Grid& grid);

struct ComparisonRow {
  std::size_t component = 0;
  double sup_dist = 0.0;
  double lmp1_dist = 0.0;
};
void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// `epsilon,comp,lmp1_dist,sup_dist` with a
/// `# slope=<s> fit_residual=<r> dropped_largest=<0|1>` footer.
void write_rate_table(std::ostream& out, const RateTable& table);

}  // namespace segsolve::io
