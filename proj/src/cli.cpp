#include "segsolve/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "segsolve/analysis.hpp"
#include "segsolve/config.hpp"
#include "segsolve/errors.hpp"
#include "segsolve/io.hpp"
#include "segsolve/kernels.hpp"

namespace segsolve::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

class Run {
 public:
  Run(const RunOptions& options, std::ostream& out) : options_(options), out_(out) {
    manifest_["tool"] = "segsolve";
    manifest_["version"] = kVersion;
    manifest_["subcommand"] = options.subcommand;
    manifest_["started_utc"] = utc_now();
    manifest_["stages"] = json::array();
    manifest_["files"] = json::array();
  }

  const std::string& stage() const { return stage_; }
  void begin(std::string name) { stage_ = std::move(name); }

  void record_stage(json stats) {
    stats["name"] = stage_;
    manifest_["stages"].push_back(std::move(stats));
  }

  void emit(const std::string& name, const std::function<void(std::ostream&)>& writer) {
    std::ostringstream buf;
    writer(buf);
    const std::string bytes = buf.str();
    const auto path = options_.out_dir / name;
    std::ofstream file(path, std::ios::binary);
    file << bytes;
    if (!file) throw std::runtime_error("cannot write " + path.string());
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    manifest_["files"].push_back({{"name", name}, {"bytes", bytes.size()}, {"fnv1a", hash}});
    out_ << "wrote " << path.string() << '\n';
  }

  json& manifest() { return manifest_; }

  void finish() {
    manifest_["finished_utc"] = utc_now();
    std::ofstream file(options_.out_dir / "manifest.json", std::ios::binary);
    file << manifest_.dump(2) << '\n';
  }

 private:
  const RunOptions& options_;
  std::ostream& out_;
  std::string stage_ = "startup";
  json manifest_;
};

json solve_stats(const SolveResult& r, std::size_t m) {
  std::size_t iterations = 0;
  double worst = 0.0;
  for (const auto& s : r.sweep_stats) {
    iterations += s.linear_iterations;
    worst = std::max(worst, s.max_relative_residual);
  }
  return {{"epsilon", r.epsilon},
          {"sweeps", r.sweeps},
          {"linear_solves", (r.sweeps + 1) * m},
          {"linear_iterations", iterations},
          {"max_relative_residual", worst},
          {"final_gap", r.final_gap},
          {"wall_seconds", r.wall_seconds}};
}

std::string limit_label(const Problem& problem) { return limit_scope_holds(problem) ? "limit" : "candidate"; }

int execute(const RunOptions& options, Run& run, std::ostream& out) {
  run.begin("config");
  SystemConfig config = parse_config(options.config);
  if (options.epsilon) {
    if (!(*options.epsilon > 0.0)) throw ConfigError("--epsilon must be positive");
    config.epsilon = *options.epsilon;
  }
  if (options.n) {
    if (*options.n < 3) throw ConfigError("--n must be at least 3");
    config.nx = *options.n;
    config.ny = config.domain.kind == DomainKind::Interval ? 1 : *options.n;
  }
  if (options.pivot < 1 || options.pivot > config.m) {
    throw ConfigError("--pivot must lie in 1.." + std::to_string(config.m));
  }
  const std::size_t pivot = options.pivot - 1;

  run.manifest()["config"] = {{"path", options.config.string()},
                              {"hash", config_hash(config.source_text)},
                              {"resolved", canonical_config(config)}};
  run.manifest()["flags"] = {{"out", options.out_dir.string()},
                             {"epsilon", config.epsilon},
                             {"pivot", options.pivot},
                             {"threads", options.threads}};

  const Problem problem = build_problem_unchecked(config);
  const AssumptionReport assumptions = check_assumptions(config, problem);
  const std::size_t m = problem.components();
  const Grid& grid = *problem.grid;

  std::filesystem::create_directories(options.out_dir);
  run.emit("config.resolved.cfg", [&](std::ostream& s) { s << canonical_config(config); });
  run.emit("grid_mask.txt", [&](std::ostream& s) { grid.write_mask(s); });

  if (options.subcommand == "validate") {
    const auto lines = assumptions.describe();
    run.emit("assumptions.txt", [&](std::ostream& s) {
      s << "# segregation_violations=" << assumptions.segregation.violations.size()
        << " coupling_violations=" << assumptions.coupling.violations.size() << '\n';
      for (const auto& l : lines) s << l << '\n';
    });
    run.record_stage({{"segregation_violations", assumptions.segregation.violations.size()},
                      {"coupling_violations", assumptions.coupling.violations.size()}});
    if (!assumptions.ok()) throw ConfigError(lines);
    out << "config is valid: m=" << m << ", " << grid.interior_nodes().size() << " interior nodes, M="
        << io::format(problem.max_boundary()) << '\n';
    return kOk;
  }
  if (!assumptions.ok()) throw ConfigError(assumptions.describe());

  const std::string label = limit_label(problem);
  if (label != "limit") out << "note: weights differ, so the explicit construction is reported as a candidate\n";

  auto solve_limit_stage = [&]() {
    run.begin("limit");
    const auto t0 = Clock::now();
    LimitResult limit = solve_limit(problem, pivot, config.solver.linear);
    run.record_stage({{"pivot", options.pivot}, {"linear_solves", m - 1}, {"wall_seconds", seconds_since(t0)}});
    return limit;
  };
  auto solve_eps_stage = [&]() {
    run.begin("solve");
    SolveResult r = solve_epsilon(problem, config.epsilon, config.solver);
    run.record_stage(solve_stats(r, m));
    out << "solve: eps=" << io::format(config.epsilon) << " converged in " << r.sweeps << " sweeps, gap "
        << io::format(r.final_gap) << '\n';
    return r;
  };
  const double delta =
      options.delta ? *options.delta : default_delta(grid, config.solver.linear.tolerance, problem.max_boundary());
  if (!(delta > 0.0)) throw ConfigError("--delta must be positive");

  auto write_interfaces = [&](const LimitResult& limit) {
    run.begin("interfaces");
    const InterfaceSet set = extract_supports_and_interfaces(limit.fields, delta);
    run.emit("interfaces.csv", [&](std::ostream& s) { io::write_interfaces(s, set, grid); });
    run.emit("zero_sets.csv", [&](std::ostream& s) { io::write_zero_sets(s, set, grid); });
    json pairs = json::array();
    for (const auto& p : set.pairs) pairs.push_back({{"pair", {p.i + 1, p.j + 1}}, {"edges", p.edges.size()}});
    run.record_stage({{"delta", delta}, {"degenerate", set.degenerate}, {"pairs", pairs}});
    return set;
  };

  if (options.subcommand == "solve") {
    const SolveResult r = solve_eps_stage();
    run.emit("solve_fields.csv", [&](std::ostream& s) { io::write_fields(s, r.fields); });
    return kOk;
  }

  if (options.subcommand == "limit") {
    const LimitResult limit = solve_limit_stage();
    run.emit(label + "_fields.csv", [&](std::ostream& s) { io::write_fields(s, limit.fields); });
    run.emit(label + "_differences.csv", [&](std::ostream& s) { io::write_fields(s, limit.differences, "w"); });
    write_interfaces(limit);
    return kOk;
  }

  if (options.subcommand == "compare") {
    const SolveResult r = solve_eps_stage();
    const LimitResult limit = solve_limit_stage();
    run.begin("compare");
    std::vector<io::ComparisonRow> rows;
    for (std::size_t i = 0; i < m; ++i) {
      const ScalarField d = r.fields[i] - limit.fields[i];
      rows.push_back({i, norm_Lp(d, kInfinity), norm_Lp(d, static_cast<double>(m + 1))});
      out << "u" << i + 1 << ": sup distance " << io::format(rows.back().sup_dist) << '\n';
    }
    run.emit("solve_fields.csv", [&](std::ostream& s) { io::write_fields(s, r.fields); });
    run.emit(label + "_fields.csv", [&](std::ostream& s) { io::write_fields(s, limit.fields); });
    run.emit("compare.csv", [&](std::ostream& s) { io::write_comparison(s, rows); });
    return kOk;
  }

  if (options.subcommand == "rate") {
    if (options.count < 1) throw ConfigError("--count must be >= 1");
    if (!(options.start > options.stop) && options.count > 1) throw ConfigError("--start must exceed --stop");
    if (options.threads < 1) throw ConfigError("--threads must be >= 1");
    const LimitResult limit = solve_limit_stage();
    run.begin("rate");
    const auto t0 = Clock::now();
    RateOptions ro;
    ro.solver = config.solver;
    ro.threads = options.threads;
    const RateTable table = rate_study(problem, geometric_ladder(options.start, options.stop, options.count), limit, ro);
    run.emit("rate.csv", [&](std::ostream& s) { io::write_rate_table(s, table); });
    std::size_t failures = 0;
    for (const auto& row : table.rows) failures += (row.failed && row.component == 0) ? 1 : 0;
    run.record_stage({{"points", options.count},
                      {"failed", failures},
                      {"slope", table.slope},
                      {"fit_residual", table.fit_residual},
                      {"dropped_largest", table.dropped_largest},
                      {"wall_seconds", seconds_since(t0)}});
    out << "rate: slope " << io::format(table.slope) << " (fit residual " << io::format(table.fit_residual)
        << (table.dropped_largest ? ", largest eps dropped" : "") << ")\n";
    if (!table.slope_defined()) out << "rate: slope undefined (fewer than two usable points)\n";
    if (failures > 0) {
      throw SolverError(std::to_string(failures) + " of " + std::to_string(options.count) +
                        " epsilon solves failed; see rate.csv");
    }
    return kOk;
  }

  if (options.subcommand == "interfaces") {
    const LimitResult limit = solve_limit_stage();
    const InterfaceSet set = write_interfaces(limit);
    run.begin("laplacian_measure");
    FieldTuple measures;
    for (const auto& u : limit.fields) measures.push_back(laplacian_measure(u));
    run.emit("laplacian_measure.csv", [&](std::ostream& s) { io::write_fields(s, measures, "mu"); });
    run.begin("jump_conditions");
    if (problem.weights.unit()) {
      const JumpReport report = jump_condition_check(limit, set);
      run.emit("jump_report.csv", [&](std::ostream& s) { io::write_jump_report(s, report, set, grid); });
      run.record_stage({{"skipped", report.skipped},
                        {"max_condition1", report.max_condition1},
                        {"max_condition2", report.max_condition2}});
      out << "jump conditions: max residual " << io::format(report.max_condition1) << " / "
          << io::format(report.max_condition2) << ", " << report.skipped << " edges skipped\n";
    } else {
      out << "jump conditions: skipped, they are only checked for unit weights\n";
    }
    return kOk;
  }

  throw std::invalid_argument("unknown subcommand '" + options.subcommand + "'");
}

}  // namespace

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  Run state(options, out);
  int code = kOk;
  try {
    code = execute(options, state, out);
  } catch (const ConfigError& ex) {
    err << "configuration error:\n";
    for (const auto& p : ex.problems()) err << "  " << p << '\n';
    code = kConfigFailure;
  } catch (const SolverError& ex) {
    err << "solver failure in stage '" << state.stage() << "': " << ex.what() << '\n';
    code = kSolverFailure;
  } catch (const std::exception& ex) {
    err << "internal error in stage '" << state.stage() << "': " << ex.what() << '\n';
    code = kInternalFailure;
  }
  state.manifest()["exit_code"] = code;
  if (std::filesystem::is_directory(options.out_dir)) {
    try {
      state.finish();
    } catch (const std::exception& ex) {
      err << "cannot write manifest: " << ex.what() << '\n';
      if (code == kOk) code = kInternalFailure;
    }
  }
  return code;
}

int main(int argc, char** argv) {
  CLI::App app{"Solver for singularly perturbed segregation systems and their limits"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunOptions options;
  std::string config_flag;
  std::string config_positional;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<int> n;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "Check the configuration and the assumptions on the data"},
      {"solve", "Solve the eps-system by fixed-point iteration"},
      {"limit", "Explicit eps -> 0 construction, fields and interfaces"},
      {"compare", "Solve and limit, plus per-component distances"},
      {"rate", "Convergence-rate study over a geometric eps ladder"},
      {"interfaces", "Supports, interfaces, Laplacian measure and jump conditions"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("path", config_positional, "Config file");
    sub->add_option("--config", config_flag, "Config file");
    sub->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--epsilon", epsilon, "Override epsilon");
    sub->add_option("--n", n, "Override nodes per axis");
    sub->add_option("--pivot", options.pivot, "Pivot component (1-based)")->capture_default_str();
    sub->add_option("--delta", delta, "Zero-set threshold");
    sub->add_option("--threads", options.threads, "Threads for the rate study")->capture_default_str();
    if (name == "rate") {
      sub->add_option("--start", options.start, "Largest epsilon")->capture_default_str();
      sub->add_option("--stop", options.stop, "Smallest epsilon")->capture_default_str();
      sub->add_option("--count", options.count, "Number of epsilon values")->capture_default_str();
    }
    sub->callback([&options, name = name] { options.subcommand = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }

  if (config_flag.empty() == config_positional.empty()) {
    std::cerr << "configuration error:\n  give the config file either positionally or with --config\n";
    return kConfigFailure;
  }
  options.config = config_flag.empty() ? config_positional : config_flag;
  options.epsilon = epsilon;
  options.delta = delta;
  options.n = n;
  return run(options, std::cout, std::cerr);
}

}  // namespace segsolve::cli
