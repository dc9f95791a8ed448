#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace segsolve {

/// Variables an expression may reference.
struct Variables {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // polar angle about the domain centre
  double s = 0.0;      // boundary parameter (arclength or angle)
};

/// Small arithmetic expression language for boundary data and weights.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Names: x, y, theta, s, pi, e. Functions: sin, cos, tan, abs, sqrt, exp,
/// log, pow, min, max. Parse failures throw ConfigError.
class Expression {
 public:
  Expression();
  static Expression parse(std::string_view text);
  /// Parses and evaluates an expression with no free variables.
  static double constant(std::string_view text);

  double evaluate(const Variables& vars) const;
  const std::string& source() const noexcept { return source_; }
  bool uses_variables() const noexcept;

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace segsolve
