#include "fracpq/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>

#include "fracpq/errors.hpp"

namespace fracpq {

struct Expression::Node {
  enum class Kind { Constant, VarX, VarY, Unary, Binary } kind;
  double value = 0.0;                    // Constant
  char op = 0;                           // Binary: + - * / ^
  double (*fn)(double) = nullptr;        // Unary
  std::shared_ptr<const Node> lhs, rhs;  // Unary uses lhs only

  double eval(double x, double y) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::VarX: return x;
      case Kind::VarY: return y;
      case Kind::Unary: return fn(lhs->eval(x, y));
      case Kind::Binary: {
        const double a = lhs->eval(x, y);
        const double b = rhs->eval(x, y);
        switch (op) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          case '/': return a / b;
          case '^': return std::pow(a, b);
        }
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  return n;
}

NodePtr make_var(char which) {
  auto n = std::make_shared<Node>();
  n->kind = which == 'x' ? Node::Kind::VarX : Node::Kind::VarY;
  return n;
}

NodePtr make_unary(double (*fn)(double), NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->fn = fn;
  n->lhs = std::move(arg);
  return n;
}

NodePtr make_binary(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression \"" + s_ + "\": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (consume('+')) lhs = make_binary('+', lhs, term());
      else if (consume('-')) lhs = make_binary('-', lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = power();
    for (;;) {
      if (consume('*')) lhs = make_binary('*', lhs, power());
      else if (consume('/')) lhs = make_binary('/', lhs, power());
      else return lhs;
    }
  }

  NodePtr power() {
    NodePtr base = unary();
    if (consume('^')) return make_binary('^', base, power());  // right-assoc
    return base;
  }

  NodePtr unary() {
    if (consume('-')) return make_binary('-', make_const(0.0), unary());
    consume('+');
    return primary();
  }

  NodePtr primary() {
    const char c = peek();
    if (c == '(') {
      consume('(');
      NodePtr e = expr();
      if (!consume(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("expected a number, name, or '('");
  }

  NodePtr number() {
    skip_ws();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("bad numeric literal");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_const(v);
  }

  NodePtr identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name == "x") return make_var('x');
    if (name == "y") return make_var('y');
    if (name == "pi") return make_const(std::numbers::pi);
    if (name == "e") return make_const(std::numbers::e);

    static const struct { const char* name; double (*fn)(double); } fns[] = {
        {"sin", std::sin}, {"cos", std::cos},   {"tan", std::tan},
        {"exp", std::exp}, {"log", std::log},   {"sqrt", std::sqrt},
        {"abs", std::fabs}, {"tanh", std::tanh},
    };
    for (const auto& f : fns) {
      if (name == f.name) {
        if (!consume('(')) fail("function '" + name + "' needs '('");
        NodePtr arg = expr();
        if (!consume(')')) fail("missing ')' after '" + name + "'");
        return make_unary(f.fn, arg);
      }
    }
    fail("unknown name '" + name + "'");
  }
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).run();
  return e;
}

double Expression::operator()(double x, double y) const {
  if (!root_) throw UsageError("evaluating an empty expression");
  return root_->eval(x, y);
}

}  // namespace fracpq
