#ifndef SLTS_ERRORS_HPP
#define SLTS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace slts {

/// Invalid problem data: scale layout, coefficient hypotheses, boundary parameters.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown at run time: step-size underflow, resolvent poles,
/// exhausted bracketing budgets, non-finite values at required nodes.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression or problem file. Carries the byte offset of
/// the offending token and the set of tokens that would have been accepted.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::vector<std::string> expected = {})
      : std::runtime_error(message), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Domain violation while evaluating an expression (division by zero,
/// sqrt of a negative number, log of a non-positive number).
class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slts

#endif
