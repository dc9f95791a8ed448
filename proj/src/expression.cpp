#include "segsolve/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "segsolve/errors.hpp"

namespace segsolve {

enum class Op {
  Number, VarX, VarY, VarTheta, VarS,
  Neg, Add, Sub, Mul, Div, Pow,
  Sin, Cos, Tan, Abs, Sqrt, Exp, Log, Min, Max
};

struct Expression::Node {
  Op op = Op::Number;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr leaf(Op op, double value = 0.0) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->value = value;
  return n;
}

NodePtr branch(Op op, std::vector<NodePtr> args) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression \"" + std::string(text_) + "\": " + what + " at offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = branch(Op::Add, {lhs, term()});
      else if (accept('-')) lhs = branch(Op::Sub, {lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = branch(Op::Mul, {lhs, unary()});
      else if (accept('/')) lhs = branch(Op::Div, {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return branch(Op::Neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return branch(Op::Pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return leaf(Op::Number, v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string id(text_.substr(start, pos_ - start));

    if (accept('(')) {
      std::vector<NodePtr> args{expr()};
      while (accept(',')) args.push_back(expr());
      if (!accept(')')) fail("expected ')' after arguments of " + id);
      struct Fn { const char* name; Op op; std::size_t arity; };
      static constexpr Fn table[] = {
          {"sin", Op::Sin, 1}, {"cos", Op::Cos, 1}, {"tan", Op::Tan, 1}, {"abs", Op::Abs, 1},
          {"sqrt", Op::Sqrt, 1}, {"exp", Op::Exp, 1}, {"log", Op::Log, 1}, {"pow", Op::Pow, 2},
          {"min", Op::Min, 2}, {"max", Op::Max, 2},
      };
      for (const auto& fn : table) {
        if (id == fn.name) {
          if (args.size() != fn.arity) fail(id + " takes " + std::to_string(fn.arity) + " argument(s)");
          return branch(fn.op, std::move(args));
        }
      }
      fail("unknown function '" + id + "'");
    }

    if (id == "x") return leaf(Op::VarX);
    if (id == "y") return leaf(Op::VarY);
    if (id == "theta") return leaf(Op::VarTheta);
    if (id == "s") return leaf(Op::VarS);
    if (id == "pi") return leaf(Op::Number, std::numbers::pi);
    if (id == "e") return leaf(Op::Number, std::numbers::e);
    fail("unknown name '" + id + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, const Variables& v) {
  auto arg = [&](std::size_t i) { return eval(*n.args[i], v); };
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::VarX: return v.x;
    case Op::VarY: return v.y;
    case Op::VarTheta: return v.theta;
    case Op::VarS: return v.s;
    case Op::Neg: return -arg(0);
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: return arg(0) / arg(1);
    case Op::Pow: return std::pow(arg(0), arg(1));
    case Op::Sin: return std::sin(arg(0));
    case Op::Cos: return std::cos(arg(0));
    case Op::Tan: return std::tan(arg(0));
    case Op::Abs: return std::abs(arg(0));
    case Op::Sqrt: return std::sqrt(arg(0));
    case Op::Exp: return std::exp(arg(0));
    case Op::Log: return std::log(arg(0));
    case Op::Min: return std::min(arg(0), arg(1));
    case Op::Max: return std::max(arg(0), arg(1));
  }
  return 0.0;
}

bool has_variables(const Expression::Node& n) {
  switch (n.op) {
    case Op::VarX:
    case Op::VarY:
    case Op::VarTheta:
    case Op::VarS: return true;
    default: break;
  }
  for (const auto& a : n.args) {
    if (has_variables(*a)) return true;
  }
  return false;
}

}  // namespace

Expression::Expression() : source_("0"), root_(leaf(Op::Number, 0.0)) {}

Expression Expression::parse(std::string_view text) {
  Expression e;
  const auto first = text.find_first_not_of(" \t\r\n");
  const auto last = text.find_last_not_of(" \t\r\n");
  e.source_ = first == std::string_view::npos ? std::string() : std::string(text.substr(first, last - first + 1));
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::constant(std::string_view text) {
  const Expression e = parse(text);
  if (e.uses_variables()) throw ConfigError("expression \"" + std::string(text) + "\" must be constant");
  return e.evaluate({});
}

double Expression::evaluate(const Variables& vars) const { return eval(*root_, vars); }

bool Expression::uses_variables() const noexcept { return has_variables(*root_); }

}  // namespace segsolve
