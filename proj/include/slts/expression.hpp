#ifndef SLTS_EXPRESSION_HPP
#define SLTS_EXPRESSION_HPP

#include <memory>
#include <string>
#include <string_view>

#include "slts/errors.hpp"

namespace slts {

/// A parsed arithmetic expression in the variable t. Supports real literals,
/// + - * / ^ with standard precedence, unary minus, parentheses, and the
/// functions sin, cos, exp, sqrt, abs, log. Immutable; evaluation is pure and
/// deterministic. Domain violations (division by zero, sqrt of a negative,
/// log of a non-positive, non-finite results) throw EvalError instead of
/// propagating NaN/Inf silently.
class Expression {
 public:
  Expression() = default;  // empty; evaluating throws

  static Expression parse(std::string_view text);
  static Expression constant(double value);

  double operator()(double t) const;
  bool empty() const { return root_ == nullptr; }

  /// Re-parseable rendering; parse(str()) evaluates identically.
  std::string str() const;
  /// The original source text when parsed from text, else str().
  const std::string& source() const { return source_; }

  struct Node;  // opaque parse-tree node, defined in the implementation

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace slts

#endif
