#pragma once

#include <memory>
#include <string>

namespace fracpq {

/// Closed-form scalar expression over the variables x (and y in 2D), parsed
/// from a configuration string such as "cos(pi*x)" or "1 - 2*x^2".
///
/// Grammar: + - * / ^ with usual precedence, parentheses, unary minus,
/// numeric literals, the constants pi and e, and the one-argument functions
/// sin cos tan exp log sqrt abs tanh.
class Expression {
 public:
  Expression() = default;

  /// Parses `text`; throws ConfigError on syntax errors or unknown names.
  static Expression parse(const std::string& text);

  double operator()(double x, double y = 0.0) const;

  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace fracpq
