#include "slts/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace slts {

namespace {

enum class Fun { Sin, Cos, Exp, Sqrt, Abs, Log };

constexpr std::array<const char*, 6> kFunNames = {"sin", "cos", "exp",
                                                  "sqrt", "abs", "log"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

struct Expression::Node {
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
  Kind kind;
  double value = 0.0;
  Fun fun = Fun::Sin;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

std::shared_ptr<Expression::Node> make(Kind k, NodePtr l = nullptr,
                                        NodePtr r = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "syntax error at offset " + std::to_string(pos_) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(msg, pos_, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr e = parse_product();
    for (;;) {
      if (eat('+')) {
        e = make(Kind::Add, e, parse_product());
      } else if (eat('-')) {
        e = make(Kind::Sub, e, parse_product());
      } else {
        return e;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr e = parse_factor();
    for (;;) {
      if (eat('*')) {
        e = make(Kind::Mul, e, parse_factor());
      } else if (eat('/')) {
        e = make(Kind::Div, e, parse_factor());
      } else {
        return e;
      }
    }
  }

  // factor handles unary minus; '^' binds tighter and is right-associative
  NodePtr parse_factor() {
    if (eat('-')) return make(Kind::Neg, parse_factor());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) return make(Kind::Pow, base, parse_factor());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size())
      fail({"number", "'t'", "function name", "'('", "'-'"});
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!eat(')')) fail({"')'"});
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
    fail({"number", "'t'", "function name", "'('", "'-'"});
  }

  NodePtr parse_number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail({"number"});
    pos_ += static_cast<std::size_t>(ptr - begin);
    auto n = make(Kind::Constant);
    n->value = value;
    return n;
  }

  NodePtr parse_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") return make(Kind::Variable);
    for (std::size_t i = 0; i < kFunNames.size(); ++i) {
      if (name == kFunNames[i]) {
        if (!eat('(')) fail({"'('"});
        NodePtr arg = parse_sum();
        if (!eat(')')) fail({"')'"});
        auto n = make(Kind::Call, arg);
        n->fun = static_cast<Fun>(i);
        return n;
      }
    }
    pos_ = start;
    throw ParseError("unknown identifier '" + std::string(name) + "' at offset " +
                         std::to_string(start),
                     start, {"'t'", "function name"});
  }
};

double eval_node(const Expression::Node& n, double t) {
  switch (n.kind) {
    case Kind::Constant:
      return n.value;
    case Kind::Variable:
      return t;
    case Kind::Add:
      return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case Kind::Sub:
      return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case Kind::Mul:
      return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case Kind::Div: {
      const double den = eval_node(*n.rhs, t);
      if (den == 0.0) throw EvalError("division by zero at t = " + fmt(t));
      return eval_node(*n.lhs, t) / den;
    }
    case Kind::Pow: {
      const double base = eval_node(*n.lhs, t);
      const double exponent = eval_node(*n.rhs, t);
      const double r = std::pow(base, exponent);
      if (!std::isfinite(r))
        throw EvalError("non-finite power " + fmt(base) + "^" + fmt(exponent) +
                        " at t = " + fmt(t));
      return r;
    }
    case Kind::Neg:
      return -eval_node(*n.lhs, t);
    case Kind::Call: {
      const double x = eval_node(*n.lhs, t);
      switch (n.fun) {
        case Fun::Sin:
          return std::sin(x);
        case Fun::Cos:
          return std::cos(x);
        case Fun::Exp: {
          const double r = std::exp(x);
          if (!std::isfinite(r)) throw EvalError("exp overflow at t = " + fmt(t));
          return r;
        }
        case Fun::Sqrt:
          if (x < 0.0)
            throw EvalError("sqrt of negative value " + fmt(x) + " at t = " + fmt(t));
          return std::sqrt(x);
        case Fun::Abs:
          return std::abs(x);
        case Fun::Log:
          if (x <= 0.0)
            throw EvalError("log of non-positive value " + fmt(x) + " at t = " + fmt(t));
          return std::log(x);
      }
      break;
    }
  }
  throw EvalError("corrupt expression node");
}

std::string print_node(const Expression::Node& n) {
  switch (n.kind) {
    case Kind::Constant:
      return fmt(n.value);
    case Kind::Variable:
      return "t";
    case Kind::Add:
      return "(" + print_node(*n.lhs) + " + " + print_node(*n.rhs) + ")";
    case Kind::Sub:
      return "(" + print_node(*n.lhs) + " - " + print_node(*n.rhs) + ")";
    case Kind::Mul:
      return "(" + print_node(*n.lhs) + " * " + print_node(*n.rhs) + ")";
    case Kind::Div:
      return "(" + print_node(*n.lhs) + " / " + print_node(*n.rhs) + ")";
    case Kind::Pow:
      return "(" + print_node(*n.lhs) + " ^ " + print_node(*n.rhs) + ")";
    case Kind::Neg:
      return "(-" + print_node(*n.lhs) + ")";
    case Kind::Call:
      return std::string(kFunNames[static_cast<std::size_t>(n.fun)]) + "(" +
             print_node(*n.lhs) + ")";
  }
  return {};
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Parser p(text);
  Expression e;
  e.root_ = p.run();
  e.source_ = std::string(text);
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = value;
  e.root_ = n;
  e.source_ = fmt(value);
  return e;
}

double Expression::operator()(double t) const {
  if (!root_) throw EvalError("evaluating an empty expression");
  return eval_node(*root_, t);
}

std::string Expression::str() const {
  return root_ ? print_node(*root_) : std::string();
}

}  // namespace slts
