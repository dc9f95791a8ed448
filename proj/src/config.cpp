#include "segsolve/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "segsolve/errors.hpp"

namespace segsolve {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

// Drops a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"') quoted = !quoted;
    if (!quoted && (line[k] == '#' || line[k] == ';')) return line.substr(0, k);
  }
  return line;
}

class Parser {
 public:
  explicit Parser(std::string_view name) : name_(name) {}

  void error(int line, const std::string& msg) {
    problems_.push_back(name_ + ":" + std::to_string(line) + ": " + msg);
  }
  void error(const std::string& msg) { problems_.push_back(name_ + ": " + msg); }
  std::vector<std::string>& problems() { return problems_; }

  std::vector<Section> split(std::string_view text) {
    std::vector<Section> sections;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
      ++lineno;
      pos = end + 1;
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          error(lineno, "malformed section header");
          continue;
        }
        sections.push_back({std::string(trim(line.substr(1, line.size() - 2))), lineno, {}});
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        error(lineno, "expected 'key = value'");
        continue;
      }
      if (sections.empty()) {
        error(lineno, "key outside of any section");
        continue;
      }
      sections.back().entries.push_back(
          {std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), lineno});
    }
    return sections;
  }

  std::optional<std::string> string_value(const Entry& e) {
    std::string_view v = e.value;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
    if (v.find('"') != std::string_view::npos) {
      error(e.line, e.key + ": unbalanced quotes");
      return std::nullopt;
    }
    return std::string(v);
  }

  std::optional<double> number(const Entry& e, std::string_view text) {
    text = trim(text);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
    try {
      return Expression::constant(text);
    } catch (const std::exception& ex) {
      error(e.line, e.key + ": expected a number, got '" + std::string(text) + "' (" + ex.what() + ")");
      return std::nullopt;
    }
  }

  std::optional<double> number(const Entry& e) { return number(e, e.value); }

  std::optional<long> integer(const Entry& e, std::string_view text) {
    text = trim(text);
    long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
      error(e.line, e.key + ": expected an integer, got '" + std::string(text) + "'");
      return std::nullopt;
    }
    return v;
  }

  // Top-level comma split of "[a, b, ...]", respecting quotes and brackets.
  std::optional<std::vector<std::string>> array(const Entry& e) {
    std::string_view v = e.value;
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
      error(e.line, e.key + ": expected an array '[..]'");
      return std::nullopt;
    }
    v = v.substr(1, v.size() - 2);
    std::vector<std::string> items;
    if (trim(v).empty()) return items;
    int depth = 0;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= v.size(); ++k) {
      if (k == v.size() || (v[k] == ',' && depth == 0 && !quoted)) {
        items.emplace_back(trim(v.substr(start, k - start)));
        start = k + 1;
        continue;
      }
      if (v[k] == '"') quoted = !quoted;
      if (!quoted && (v[k] == '(' || v[k] == '[')) ++depth;
      if (!quoted && (v[k] == ')' || v[k] == ']')) --depth;
    }
    return items;
  }

  std::optional<std::vector<double>> numbers(const Entry& e) {
    auto items = array(e);
    if (!items) return std::nullopt;
    std::vector<double> out;
    bool ok = true;
    for (const auto& s : *items) {
      if (auto d = number(e, s)) {
        out.push_back(*d);
      } else {
        ok = false;
      }
    }
    return ok ? std::optional(out) : std::nullopt;
  }

 private:
  std::string name_;
  std::vector<std::string> problems_;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"domain", {"kind", "bounds", "center", "radius", "n"}},
      {"system", {"m", "epsilon", "alpha", "A"}},
      {"coupling", {"A"}},
      {"exponents", {"alpha"}},
      {"solver", {"tol_linear", "tol_fp", "max_sweeps", "linear"}},
  };
  return keys;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

}  // namespace

SystemConfig parse_config_text(std::string_view text, std::string_view name) {
  Parser p(name);
  SystemConfig cfg;
  cfg.source_text = std::string(text);
  cfg.source_name = std::string(name);

  const std::vector<Section> sections = p.split(text);
  std::map<std::string, const Entry*> seen;  // "section.key" -> entry
  std::map<std::size_t, std::vector<const Entry*>> pieces;
  std::set<std::string> section_names;

  for (const auto& sec : sections) {
    if (!section_names.insert(sec.name).second) p.error(sec.line, "duplicate section [" + sec.name + "]");
    if (sec.name.rfind("boundary.", 0) == 0) {
      long idx = 0;
      const std::string_view num = std::string_view(sec.name).substr(9);
      const auto res = std::from_chars(num.data(), num.data() + num.size(), idx);
      if (res.ec != std::errc{} || res.ptr != num.data() + num.size() || idx < 1) {
        p.error(sec.line, "bad boundary section name [" + sec.name + "]");
        continue;
      }
      auto& list = pieces[static_cast<std::size_t>(idx)];
      for (const auto& e : sec.entries) {
        if (e.key != "piece") {
          p.error(e.line, "unknown key '" + e.key + "' in [" + sec.name + "]");
        } else {
          list.push_back(&e);
        }
      }
      continue;
    }
    const auto it = schema().find(sec.name);
    if (it == schema().end()) {
      p.error(sec.line, "unknown section [" + sec.name + "]");
      continue;
    }
    for (const auto& e : sec.entries) {
      if (!it->second.count(e.key)) {
        p.error(e.line, "unknown key '" + e.key + "' in [" + sec.name + "]");
        continue;
      }
      std::string canonical = e.key;  // alias sections share the [system] namespace
      if (sec.name == "domain" || sec.name == "solver") canonical = sec.name + "." + e.key;
      if (seen.count(canonical)) {
        p.error(e.line, "duplicate key '" + e.key + "'");
        continue;
      }
      seen[canonical] = &e;
    }
  }

  auto get = [&](const std::string& key) -> const Entry* {
    const auto it = seen.find(key);
    return it == seen.end() ? nullptr : it->second;
  };

  // [domain]
  const Entry* kind = get("domain.kind");
  if (!kind) {
    p.error("[domain] kind is required");
  } else {
    const std::string k = unquote(kind->value);
    const Entry* bounds = get("domain.bounds");
    const Entry* center = get("domain.center");
    const Entry* radius = get("domain.radius");
    if (k == "interval" || k == "rectangle") {
      const std::size_t want = k == "interval" ? 2 : 4;
      if (center || radius) p.error(kind->line, k + " domains take 'bounds', not 'center'/'radius'");
      if (!bounds) {
        p.error(kind->line, k + " domain needs 'bounds'");
      } else if (auto b = p.numbers(*bounds)) {
        if (b->size() != want) {
          p.error(bounds->line, "bounds: expected " + std::to_string(want) + " numbers");
        } else {
          cfg.domain = want == 2 ? DomainSpec::interval((*b)[0], (*b)[1])
                                 : DomainSpec::rectangle((*b)[0], (*b)[1], (*b)[2], (*b)[3]);
          if (!((*b)[1] > (*b)[0]) || (want == 4 && !((*b)[3] > (*b)[2]))) {
            p.error(bounds->line, "bounds: empty domain");
          }
        }
      }
    } else if (k == "disk") {
      if (bounds) p.error(bounds->line, "disk domains take 'center' and 'radius', not 'bounds'");
      Point c{0.0, 0.0};
      double r = 1.0;
      if (center) {
        if (auto v = p.numbers(*center)) {
          if (v->size() != 2) {
            p.error(center->line, "center: expected [x, y]");
          } else {
            c = {(*v)[0], (*v)[1]};
          }
        }
      }
      if (!radius) {
        p.error(kind->line, "disk domain needs 'radius'");
      } else if (auto v = p.number(*radius)) {
        r = *v;
        if (!(r > 0.0)) p.error(radius->line, "radius must be positive");
      }
      cfg.domain = DomainSpec::disk(c, r);
    } else {
      p.error(kind->line, "kind: expected interval, rectangle or disk");
    }
  }
  if (const Entry* n = get("domain.n")) {
    if (!n->value.empty() && n->value.front() == '[') {
      if (auto items = p.array(*n)) {
        if (items->size() != 2) {
          p.error(n->line, "n: expected an integer or [nx, ny]");
        } else {
          auto a = p.integer(*n, (*items)[0]);
          auto b = p.integer(*n, (*items)[1]);
          if (a && b) {
            cfg.nx = static_cast<int>(*a);
            cfg.ny = static_cast<int>(*b);
          }
        }
      }
    } else if (auto v = p.integer(*n, n->value)) {
      cfg.nx = cfg.ny = static_cast<int>(*v);
    }
    if (cfg.nx < 3 || cfg.ny < 3) p.error(n->line, "n: need at least 3 nodes per axis");
  }
  if (cfg.domain.kind == DomainKind::Interval) cfg.ny = 1;

  // [system]
  const Entry* m = get("m");
  if (!m) {
    p.error("[system] m is required");
  } else if (auto v = p.integer(*m, m->value)) {
    if (*v < 2) {
      p.error(m->line, "m: need at least two components");
    } else {
      cfg.m = static_cast<std::size_t>(*v);
    }
  }
  if (const Entry* e = get("epsilon")) {
    if (auto v = p.number(*e)) {
      cfg.epsilon = *v;
      if (!(cfg.epsilon > 0.0)) p.error(e->line, "epsilon must be positive");
    }
  }
  cfg.alpha.assign(cfg.m, 1.0);
  if (const Entry* e = get("alpha")) {
    if (auto v = p.numbers(*e)) {
      if (v->size() != cfg.m) {
        p.error(e->line, "alpha: expected " + std::to_string(cfg.m) + " entries");
      } else {
        cfg.alpha = *v;
        for (std::size_t i = 0; i < v->size(); ++i) {
          if (!((*v)[i] >= 1.0)) p.error(e->line, "alpha_" + std::to_string(i + 1) + " must be >= 1");
        }
      }
    }
  }
  cfg.weights.assign(cfg.m, "1");
  if (const Entry* e = get("A")) {
    if (auto items = p.array(*e)) {
      if (items->size() != cfg.m) {
        p.error(e->line, "A: expected " + std::to_string(cfg.m) + " entries");
      } else {
        for (std::size_t i = 0; i < items->size(); ++i) {
          cfg.weights[i] = unquote((*items)[i]);
          try {
            (void)Expression::parse(cfg.weights[i]);
          } catch (const std::exception& ex) {
            p.error(e->line, "A_" + std::to_string(i + 1) + ": " + ex.what());
          }
        }
      }
    }
  }

  // [boundary.i]
  cfg.boundary.resize(cfg.m);
  for (std::size_t i = 0; i < cfg.m; ++i) cfg.boundary[i].component = i;
  for (const auto& [idx, entries] : pieces) {
    if (cfg.m > 0 && idx > cfg.m) {
      p.error(entries.empty() ? 0 : entries.front()->line,
              "[boundary." + std::to_string(idx) + "] exceeds m = " + std::to_string(cfg.m));
      continue;
    }
    for (const Entry* e : entries) {
      const auto text = p.string_value(*e);
      if (!text) continue;
      try {
        BoundaryPiece piece = BoundaryPiece::parse(*text);
        if (!piece.range.compatible_with(cfg.domain.kind)) {
          p.error(e->line, "selector '" + piece.range.source + "' does not apply to this domain");
          continue;
        }
        if (idx <= cfg.boundary.size()) cfg.boundary[idx - 1].pieces.push_back(std::move(piece));
      } catch (const std::exception& ex) {
        p.error(e->line, ex.what());
      }
    }
  }

  // [solver]
  if (const Entry* e = get("solver.tol_linear")) {
    if (auto v = p.number(*e)) {
      cfg.solver.linear.tolerance = *v;
      if (!(*v > 0.0)) p.error(e->line, "tol_linear must be positive");
    }
  }
  if (const Entry* e = get("solver.tol_fp")) {
    if (auto v = p.number(*e)) {
      cfg.solver.tol_fp = *v;
      if (!(*v > 0.0)) p.error(e->line, "tol_fp must be positive");
    }
  }
  if (const Entry* e = get("solver.max_sweeps")) {
    if (auto v = p.integer(*e, e->value)) {
      if (*v < 1) {
        p.error(e->line, "max_sweeps must be >= 1");
      } else {
        cfg.solver.max_sweeps = static_cast<std::size_t>(*v);
      }
    }
  }
  if (const Entry* e = get("solver.linear")) {
    const std::string v = unquote(e->value);
    if (v == "direct") {
      cfg.solver.linear.method = LinearMethod::Direct;
    } else if (v == "cg") {
      cfg.solver.linear.method = LinearMethod::ConjugateGradient;
    } else {
      p.error(e->line, "linear: expected 'direct' or 'cg'");
    }
  }

  if (!p.problems().empty()) throw ConfigError(p.problems());
  return cfg;
}

SystemConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(std::string_view text) {
  std::string compact;
  compact.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(compact)));
  return buf;
}

std::string canonical_config(const SystemConfig& c) {
  std::ostringstream out;
  auto list = [](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + shortest(v[k]);
    return s + "]";
  };
  out << "[domain]\n";
  switch (c.domain.kind) {
    case DomainKind::Interval:
      out << "kind = interval\nbounds = " << list({c.domain.xmin, c.domain.xmax}) << "\nn = " << c.nx << "\n";
      break;
    case DomainKind::Rectangle:
      out << "kind = rectangle\nbounds = " << list({c.domain.xmin, c.domain.xmax, c.domain.ymin, c.domain.ymax})
          << "\nn = [" << c.nx << ", " << c.ny << "]\n";
      break;
    case DomainKind::Disk:
      out << "kind = disk\ncenter = " << list({c.domain.center.x, c.domain.center.y})
          << "\nradius = " << shortest(c.domain.radius) << "\nn = [" << c.nx << ", " << c.ny << "]\n";
      break;
  }
  out << "\n[system]\nm = " << c.m << "\nepsilon = " << shortest(c.epsilon) << "\nalpha = " << list(c.alpha)
      << "\nA = [";
  for (std::size_t i = 0; i < c.weights.size(); ++i) out << (i ? ", " : "") << '"' << c.weights[i] << '"';
  out << "]\n";
  for (const auto& d : c.boundary) {
    out << "\n[boundary." << d.component + 1 << "]\n";
    for (const auto& piece : d.pieces) out << "piece = \"" << piece.range.source << ": " << piece.expr.source() << "\"\n";
  }
  out << "\n[solver]\ntol_linear = " << shortest(c.solver.linear.tolerance) << "\ntol_fp = " << shortest(c.solver.tol_fp)
      << "\nmax_sweeps = " << c.solver.max_sweeps
      << "\nlinear = " << (c.solver.linear.method == LinearMethod::ConjugateGradient ? "cg" : "direct") << "\n";
  return out.str();
}

GridPtr build_grid(const SystemConfig& config) {
  try {
    return build_grid(config.domain, config.nx, config.ny);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("domain: ") + ex.what());
  }
}

CouplingWeights build_weights(const SystemConfig& config, const GridPtr& grid) {
  std::vector<Expression> exprs;
  bool constant = true;
  for (const auto& w : config.weights) {
    exprs.push_back(Expression::parse(w));
    constant = constant && !exprs.back().uses_variables();
  }
  if (constant) {
    std::vector<double> values;
    for (const auto& e : exprs) values.push_back(e.evaluate({}));
    return CouplingWeights::constants(grid, values);
  }
  FieldTuple fields;
  for (const auto& e : exprs) {
    ScalarField f(grid);
    for (std::size_t k : grid->domain_nodes()) {
      const Point x = grid->position(k);
      f[k] = e.evaluate({x.x, x.y, polar_angle(*grid, x), 0.0});
    }
    fields.push_back(std::move(f));
  }
  return CouplingWeights::tabulated(std::move(fields));
}

std::vector<std::string> AssumptionReport::describe() const {
  std::vector<std::string> out;
  for (const auto& v : segregation.violations) {
    std::ostringstream s;
    s << "partial segregation (product of boundary data = 0) violated at boundary node " << v.node << " ("
      << shortest(v.position.x) << ", " << shortest(v.position.y) << "): product " << shortest(v.product) << " > "
      << shortest(segregation.tolerance);
    out.push_back(s.str());
  }
  // Constant weights violate at every node, so summarise per component.
  std::map<std::size_t, std::pair<std::size_t, CouplingViolation>> per;
  for (const auto& v : coupling.violations) {
    auto& slot = per[v.component];
    if (slot.first++ == 0) slot.second = v;
  }
  for (const auto& [i, info] : per) {
    const auto& v = info.second;
    std::ostringstream s;
    s << "coupling condition 0 < A_i <= sum_{j != i} A_j violated for A_" << i + 1 << " at " << info.first
      << " interior node(s); first at node " << v.node << ": A_" << i + 1 << " = " << shortest(v.value)
      << ", sum of the others = " << shortest(v.others);
    out.push_back(s.str());
  }
  return out;
}

AssumptionReport check_assumptions(const SystemConfig&, const Problem& problem) {
  AssumptionReport r;
  r.segregation = validate_partial_segregation(problem.boundary);
  r.coupling = validate_coupling(problem.weights, *problem.grid);
  return r;
}

Problem build_problem_unchecked(const SystemConfig& config) {
  const GridPtr grid = build_grid(config);
  CouplingWeights weights = build_weights(config, grid);
  return make_problem(grid, config.boundary, std::move(weights), config.alpha);
}

Problem build_problem(const SystemConfig& config) {
  Problem problem = build_problem_unchecked(config);
  const AssumptionReport report = check_assumptions(config, problem);
  if (!report.ok()) throw ConfigError(report.describe());
  return problem;
}

}  // namespace segsolve
