#include "segsolve/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace segsolve::io {

namespace {

void write_position(std::ostream& out, const Grid& grid, Point p) {
  out << format(p.x);
  if (grid.dimension() == 2) out << ',' << format(p.y);
}

void position_header(std::ostream& out, const Grid& grid) { out << (grid.dimension() == 2 ? "x,y" : "x"); }

}  // namespace

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_fields(std::ostream& out, const FieldTuple& fields, const std::string& prefix) {
  if (fields.empty()) throw std::invalid_argument("no fields to write");
  const Grid& g = fields.front().grid();
  position_header(out, g);
  for (std::size_t i = 0; i < fields.size(); ++i) out << ',' << prefix << i + 1;
  out << '\n';
  for (std::size_t k : g.domain_nodes()) {
    write_position(out, g, g.position(k));
    for (const auto& f : fields) out << ',' << format(f[k]);
    out << '\n';
  }
}

FieldTable read_fields(std::istream& in) {
  FieldTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty field file");
  std::stringstream header(line);
  for (std::string col; std::getline(header, col, ',');) table.columns.push_back(col);
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::stringstream row(line);
    std::vector<double> values;
    for (std::string cell; std::getline(row, cell, ',');) values.push_back(std::stod(cell));
    if (values.size() != table.columns.size()) throw std::runtime_error("ragged field file");
    table.rows.push_back(std::move(values));
  }
  return table;
}

void write_zero_sets(std::ostream& out, const InterfaceSet& interfaces, const Grid& grid) {
  position_header(out, grid);
  for (std::size_t i = 0; i < interfaces.zero_sets.size(); ++i) out << ",z" << i + 1;
  out << '\n';
  for (std::size_t k : grid.domain_nodes()) {
    write_position(out, grid, grid.position(k));
    for (const auto& z : interfaces.zero_sets) out << ',' << int(z[k]);
    out << '\n';
  }
  out << "# delta=" << format(interfaces.delta) << " degenerate=" << (interfaces.degenerate ? 1 : 0) << '\n';
}

void write_interfaces(std::ostream& out, const InterfaceSet& interfaces, const Grid& grid) {
  out << "i,j,";
  position_header(out, grid);
  out << (grid.dimension() == 2 ? ",normal_x,normal_y\n" : ",normal_x\n");
  for (const auto& pair : interfaces.pairs) {
    for (const auto& e : pair.edges) {
      out << pair.i + 1 << ',' << pair.j + 1 << ',';
      write_position(out, grid, e.midpoint);
      out << ',' << format(e.normal.x);
      if (grid.dimension() == 2) out << ',' << format(e.normal.y);
      out << '\n';
    }
  }
}

void write_jump_report(std::ostream& out, const JumpReport& report, const InterfaceSet& interfaces, const Grid& grid) {
  out << "i,j,";
  position_header(out, grid);
  out << ",condition1,condition2\n";
  for (std::size_t p = 0; p < report.pairs.size(); ++p) {
    const auto& stats = report.pairs[p];
    const auto& pair = interfaces.pair(stats.i, stats.j);
    for (const auto& r : stats.residuals) {
      out << stats.i + 1 << ',' << stats.j + 1 << ',';
      write_position(out, grid, pair.edges[r.edge].midpoint);
      out << ',' << format(r.condition1) << ',' << format(r.condition2) << '\n';
    }
  }
  for (const auto& stats : report.pairs) {
    out << "# pair=" << stats.i + 1 << ',' << stats.j + 1 << " checked=" << stats.checked
        << " skipped=" << stats.skipped << " thin=" << (stats.thin ? 1 : 0) << " max_condition1=" << format(stats.max_condition1)
        << " max_condition2=" << format(stats.max_condition2) << '\n';
  }
  out << "# skipped=" << report.skipped << " max_condition1=" << format(report.max_condition1)
      << " max_condition2=" << format(report.max_condition2) << '\n';
}

void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "comp,sup_dist,lmp1_dist\n";
  for (const auto& r : rows) out << r.component + 1 << ',' << format(r.sup_dist) << ',' << format(r.lmp1_dist) << '\n';
}

void write_rate_table(std::ostream& out, const RateTable& table) {
  out << "epsilon,comp,lmp1_dist,sup_dist\n";
  for (const auto& r : table.rows) {
    out << format(r.epsilon) << ',' << r.component + 1 << ',' << format(r.lmp1_dist) << ',' << format(r.sup_dist)
        << '\n';
  }
  for (const auto& r : table.rows) {
    if (r.failed && r.component == 0) out << "# failed epsilon=" << format(r.epsilon) << ": " << r.error << '\n';
  }
  out << "# slope=" << format(table.slope) << " fit_residual=" << format(table.fit_residual)
      << " dropped_largest=" << (table.dropped_largest ? 1 : 0) << '\n';
}

}  // namespace segsolve::io
