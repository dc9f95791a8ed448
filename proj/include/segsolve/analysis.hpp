#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "segsolve/elliptic.hpp"
#include "segsolve/epsilon_solver.hpp"
#include "segsolve/limit_solver.hpp"
#include "segsolve/problem.hpp"

namespace segsolve {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Midpoint-rule L^p norm over interior and boundary nodes,
/// (sum h^d |u|^p)^(1/p); the sup norm for p = infinity.
double norm_Lp(const ScalarField& u, double p);

struct SegregationResidual {
  double max_product = 0.0;                // max over domain nodes of prod_j u_j
  std::vector<double> reaction_integrals;  // int A_i prod_j u_j^alpha_j, one per component
};

/// `alpha` may be empty (all exponents 1).
SegregationResidual segregation_residual(const FieldTuple& fields, const CouplingWeights& weights,
                                         std::span<const double> alpha = {});

/// Zero-set threshold max(10 * tol * M, h * M).
double default_delta(const Grid& grid, double tol, double max_boundary);

struct InterfaceEdge {
  std::size_t a = 0;  // node on the u_i > 0 side (in the zero set of u_j)
  std::size_t b = 0;  // node in the zero set of u_i
  Point midpoint{};
  Point normal{};  // unit vector along grad(u_i - u_j), or the edge direction if that vanishes
};

struct PairInterface {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<InterfaceEdge> edges;
};

/// Zero sets Z_i = {u_i < delta} and the discrete interfaces between them.
///
/// For a pair i < j, a grid edge (a, b) belongs to the interface when a is in
/// Z_j, b is in Z_i and u_i - u_j changes sign across it: >= 0 at a, <= 0 at
/// b, not both within the tie band 1e-6 * delta, and not tied at a boundary
/// node. Near an interface both fields are below delta on a band that can be
/// several nodes wide, so membership alone does not locate it. When a node
/// is tied, only the edge arriving at it is kept.
struct InterfaceSet {
  double delta = 0.0;
  std::vector<std::vector<std::uint8_t>> zero_sets;  // [component][node]
  std::vector<PairInterface> pairs;                  // (0,1), (0,2), ..., (m-2,m-1)
  bool degenerate = false;                           // some zero set covers the whole domain

  const PairInterface& pair(std::size_t i, std::size_t j) const;
  std::size_t zero_set_size(std::size_t i) const;
};

InterfaceSet extract_supports_and_interfaces(const FieldTuple& fields, double delta);

/// The domain node minimising the largest distance to the edge midpoints of
/// every nonempty pair interface, and that distance.
struct MeetingPoint {
  std::size_t node = 0;
  Point position{};
  double radius = kInfinity;
};
MeetingPoint interface_meeting_point(const InterfaceSet& interfaces, const Grid& grid);

/// h * Lap_h u at interior nodes, 0 elsewhere (h = smallest spacing).
ScalarField laplacian_measure(const ScalarField& u);

struct JumpEdgeResidual {
  std::size_t edge = 0;
  double condition1 = 0.0;
  double condition2 = 0.0;  // max over k != i, j (0 for m = 2)
};

struct JumpPairStats {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  bool thin = false;  // a zero set of the pair has no interior node; all edges skipped
  double max_condition1 = 0.0;
  double max_condition2 = 0.0;
  std::vector<JumpEdgeResidual> residuals;
};

struct JumpReport {
  std::vector<JumpPairStats> pairs;
  std::size_t skipped = 0;
  double max_condition1 = 0.0;
  double max_condition2 = 0.0;
};

/// Residuals of the free-boundary conditions
///   (1) d_n u_i|_{Z_j} + d_n u_j|_{Z_i} = 0
///   (2) d_n u_k|_{Z_j} - d_n u_k|_{Z_i} = d_n u_i|_{Z_j},  k != i, j
/// along each interface edge, with first-order one-sided differences taken
/// along the edge direction. An edge is skipped when a stencil leaves the
/// domain or its own zero set. A pair is skipped as a whole when one of its
/// zero sets has no interior node (every node touches the complement), since
/// there is then no one-sided region to difference in.
JumpReport jump_condition_check(const FieldTuple& fields, const InterfaceSet& interfaces);
JumpReport jump_condition_check(const LimitResult& limit, const InterfaceSet& interfaces);

/// Forward-difference Dirichlet energy sum_i int |grad u_i|^2.
double discrete_energy(const FieldTuple& fields);

/// h_i (harmonic extension of phi_i) and H_i (harmonic extension of
/// phi_i - sum_{j != i} phi_j).
struct HarmonicBounds {
  FieldTuple upper;
  FieldTuple lower;
};
HarmonicBounds harmonic_bounds(const Problem& problem, EllipticSolver& solver);

/// u_i - sum_{j != i} u_j.
FieldTuple hat_fields(const FieldTuple& fields);

struct RateOptions {
  FixedPointOptions solver;
  int threads = 1;
  double drop_threshold = 0.05;
};

struct RateRow {
  double epsilon = 0.0;
  std::size_t component = 0;
  double lmp1_dist = 0.0;  // L^{m+1} distance to the limit
  double sup_dist = 0.0;
  bool failed = false;
  std::string error;
};

struct RateTable {
  std::vector<double> epsilons;
  std::vector<RateRow> rows;  // grouped by epsilon in input order, then component
  std::size_t pivot = 0;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double fit_residual = std::numeric_limits<double>::quiet_NaN();
  bool dropped_largest = false;
  bool slope_defined() const noexcept { return slope == slope; }
};

/// Solves the eps-system for every eps (concurrently when threads > 1) and
/// fits log(dist) = slope * log(eps) + intercept for the pivot component.
/// The fit residual is the RMS of the log-space residuals; if it exceeds
/// `drop_threshold` with three or more points, the largest eps is dropped
/// once. Failed solves give NaN rows and are left out of the fit.
RateTable rate_study(const Problem& problem, const std::vector<double>& epsilons, const LimitResult& limit,
                     const RateOptions& options = {});

/// Least-squares fit as used by rate_study; exposed for testing.
struct LogLogFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool dropped_largest = false;
};
LogLogFit fit_loglog(std::span<const double> eps, std::span<const double> dist, double drop_threshold = 0.05);

/// Geometric ladder from `start` down to `stop` with `count` points.
std::vector<double> geometric_ladder(double start, double stop, std::size_t count);

}  // namespace segsolve
