#include "ret14/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "ret14/special_functions.hpp"

namespace ret14 {

struct Expression::Node {
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::size_t variable = 0;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

struct FunctionInfo {
  const char* name;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"exp", 1},  {"log", 1},  {"sqrt", 1}, {"abs", 1},  {"sin", 1},     {"cos", 1},
    {"tan", 1},  {"sinh", 1}, {"cosh", 1}, {"tanh", 1}, {"pow", 2},     {"min", 2},
    {"max", 2},  {"G", 1},    {"besselk", 2},
};

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : s_(src), vars_(vars) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ExpressionError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) {
        n = binary(Kind::Add, n, term());
      } else if (accept('-')) {
        n = binary(Kind::Sub, n, term());
      } else {
        return n;
      }
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) {
        n = binary(Kind::Mul, n, unary());
      } else if (accept('/')) {
        n = binary(Kind::Div, n, unary());
      } else {
        return n;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Negate;
      n->args = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    auto n = std::make_shared<Expression::Node>();
    n->number = v;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(s_.substr(start, pos_ - start));
    if (accept('(')) {
      const auto* info = std::find_if(std::begin(kFunctions), std::end(kFunctions),
                                      [&](const FunctionInfo& f) { return name == f.name; });
      if (info == std::end(kFunctions)) {
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Call;
      n->function = name;
      if (!accept(')')) {
        do {
          n->args.push_back(expr());
        } while (accept(','));
        if (!accept(')')) fail("expected ')' after arguments of " + name);
      }
      if (n->args.size() != info->arity) {
        fail(name + " takes " + std::to_string(info->arity) + " argument(s)");
      }
      return n;
    }
    auto n = std::make_shared<Expression::Node>();
    if (name == "pi") {
      n->number = std::numbers::pi;
      return n;
    }
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) {
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    n->kind = Kind::Variable;
    n->variable = static_cast<std::size_t>(it - vars_.begin());
    return n;
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

double call(const std::string& f, double x, double y) {
  if (f == "exp") return std::exp(x);
  if (f == "log") return std::log(x);
  if (f == "sqrt") return std::sqrt(x);
  if (f == "abs") return std::abs(x);
  if (f == "sin") return std::sin(x);
  if (f == "cos") return std::cos(x);
  if (f == "tan") return std::tan(x);
  if (f == "sinh") return std::sinh(x);
  if (f == "cosh") return std::cosh(x);
  if (f == "tanh") return std::tanh(x);
  if (f == "pow") return std::pow(x, y);
  if (f == "min") return std::min(x, y);
  if (f == "max") return std::max(x, y);
  if (f == "G") return bessel_ratio_g(x);
  if (f == "besselk") return bessel_k(static_cast<int>(std::lround(x)), y);
  return std::nan("");
}

double eval(const Expression::Node& n, std::span<const double> v) {
  switch (n.kind) {
    case Kind::Number:
      return n.number;
    case Kind::Variable:
      return v[n.variable];
    case Kind::Negate:
      return -eval(*n.args[0], v);
    case Kind::Add:
      return eval(*n.args[0], v) + eval(*n.args[1], v);
    case Kind::Sub:
      return eval(*n.args[0], v) - eval(*n.args[1], v);
    case Kind::Mul:
      return eval(*n.args[0], v) * eval(*n.args[1], v);
    case Kind::Div:
      return eval(*n.args[0], v) / eval(*n.args[1], v);
    case Kind::Pow:
      return std::pow(eval(*n.args[0], v), eval(*n.args[1], v));
    case Kind::Call: {
      const double x = eval(*n.args[0], v);
      const double y = n.args.size() > 1 ? eval(*n.args[1], v) : 0.0;
      return call(n.function, x, y);
    }
  }
  return std::nan("");
}

}  // namespace

Expression Expression::parse(std::string_view source, std::vector<std::string> variables) {
  Expression e;
  e.root_ = Parser(source, variables).parse();
  e.source_ = std::string(source);
  return e;
}

double Expression::evaluate(std::span<const double> values) const { return eval(*root_, values); }

}  // namespace ret14
