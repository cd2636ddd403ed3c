#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ret14/errors.hpp"

namespace ret14 {

class ExpressionError : public Error {
 public:
  ExpressionError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Arithmetic expression over named variables, parsed once and evaluated
/// many times.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
/// the constant pi and the functions exp log sqrt abs sin cos tan sinh cosh
/// tanh pow(x, y) min(x, y) max(x, y) besselk(n, x) and G(x) = K_3(x)/K_2(x).
class Expression {
 public:
  struct Node;

  // Throws ExpressionError for syntax errors and unknown identifiers.
  static Expression parse(std::string_view source, std::vector<std::string> variables);

  // values[i] binds variables[i] of parse().
  double evaluate(std::span<const double> values) const;
  const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace ret14
