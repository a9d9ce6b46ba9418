#pragma once

// Arithmetic expression language used for phi(t), g(x) and exact solutions.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// so "-x^2" is -(x^2) and "2^-1" is 2^(-1). The names pi and e are folded
// to constants at parse time.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "abeltc/error.hpp"

namespace abeltc::expr {

enum class TokenKind { number, identifier, op, left_paren, right_paren, comma };

struct Token {
  TokenKind kind;
  std::string lexeme;
  std::size_t position;
};

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, exp, log, sqrt, abs, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Constant {
  double value;
};
struct Variable {
  std::string name;
};
struct Negate {
  NodePtr child;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Function function;
  std::vector<NodePtr> args;
};

struct Node {
  std::variant<Constant, Variable, Negate, Binary, Call> data;
};

using Bindings = std::map<std::string, double, std::less<>>;

inline std::string_view function_name(Function f) {
  switch (f) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::tan: return "tan";
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
    case Function::pow: return "pow";
  }
  return "?";
}

inline std::size_t function_arity(Function f) { return f == Function::pow ? 2 : 1; }

inline std::optional<Function> function_from_name(std::string_view name) {
  static constexpr std::array all = {Function::sin, Function::cos,  Function::tan, Function::exp,
                                     Function::log, Function::sqrt, Function::abs, Function::pow};
  for (Function f : all) {
    if (function_name(f) == name) return f;
  }
  return std::nullopt;
}

namespace detail {

inline bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '_'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline std::string format_real(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

inline double parse_real(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nan("");
  return v;
}

}  // namespace detail

/// Splits source into tokens. Whitespace separates tokens and is dropped.
inline std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = source.size();
  while (i < n) {
    const char c = source[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (detail::is_digit(c) || (c == '.' && i + 1 < n && detail::is_digit(source[i + 1]))) {
      while (i < n && detail::is_digit(source[i])) ++i;
      if (i < n && source[i] == '.') {
        ++i;
        while (i < n && detail::is_digit(source[i])) ++i;
      }
      if (i < n && (source[i] == 'e' || source[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (source[j] == '+' || source[j] == '-')) ++j;
        if (j < n && detail::is_digit(source[j])) {
          i = j;
          while (i < n && detail::is_digit(source[i])) ++i;
        }
      }
      std::string lexeme(source.substr(start, i - start));
      if (!std::isfinite(detail::parse_real(lexeme))) {
        throw ParseError(ParseError::Kind::lexical, start, "number '" + lexeme + "' is not a finite real");
      }
      out.push_back({TokenKind::number, std::move(lexeme), start});
    } else if (detail::is_ident_start(c)) {
      while (i < n && detail::is_ident_char(source[i])) ++i;
      out.push_back({TokenKind::identifier, std::string(source.substr(start, i - start)), start});
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({TokenKind::op, std::string(1, c), start});
      ++i;
    } else if (c == '(') {
      out.push_back({TokenKind::left_paren, "(", start});
      ++i;
    } else if (c == ')') {
      out.push_back({TokenKind::right_paren, ")", start});
      ++i;
    } else if (c == ',') {
      out.push_back({TokenKind::comma, ",", start});
      ++i;
    } else {
      throw ParseError(ParseError::Kind::lexical, start, std::string("unexpected character '") + c + "'");
    }
  }
  return out;
}

// Node constructors. The folding variants collapse constant subtrees and
// neutral elements only.
namespace build {

inline NodePtr constant(double v) { return std::make_shared<const Node>(Node{Constant{v}}); }
inline NodePtr variable(std::string name) { return std::make_shared<const Node>(Node{Variable{std::move(name)}}); }
inline NodePtr negate(NodePtr c) { return std::make_shared<const Node>(Node{Negate{std::move(c)}}); }
inline NodePtr binary(BinaryOp op, NodePtr l, NodePtr r) {
  return std::make_shared<const Node>(Node{Binary{op, std::move(l), std::move(r)}});
}
inline NodePtr call(Function f, std::vector<NodePtr> args) {
  return std::make_shared<const Node>(Node{Call{f, std::move(args)}});
}

inline std::optional<double> constant_value(const NodePtr& n) {
  if (const auto* c = std::get_if<Constant>(&n->data)) return c->value;
  return std::nullopt;
}

inline bool is_constant(const NodePtr& n, double v) {
  auto c = constant_value(n);
  return c && *c == v;
}

inline double apply(BinaryOp op, double l, double r) {
  switch (op) {
    case BinaryOp::add: return l + r;
    case BinaryOp::sub: return l - r;
    case BinaryOp::mul: return l * r;
    case BinaryOp::div: return l / r;
    case BinaryOp::pow: return std::pow(l, r);
  }
  return std::nan("");
}

inline double apply(Function f, double a, double b = 0.0) {
  switch (f) {
    case Function::sin: return std::sin(a);
    case Function::cos: return std::cos(a);
    case Function::tan: return std::tan(a);
    case Function::exp: return std::exp(a);
    case Function::log: return std::log(a);
    case Function::sqrt: return std::sqrt(a);
    case Function::abs: return std::fabs(a);
    case Function::pow: return std::pow(a, b);
  }
  return std::nan("");
}

inline NodePtr fold_negate(NodePtr c) {
  if (auto v = constant_value(c)) return constant(-*v);
  return negate(std::move(c));
}

inline NodePtr fold_binary(BinaryOp op, NodePtr l, NodePtr r) {
  auto lv = constant_value(l);
  auto rv = constant_value(r);
  if (lv && rv) {
    const double v = apply(op, *lv, *rv);
    if (std::isfinite(v)) return constant(v);
  }
  switch (op) {
    case BinaryOp::add:
      if (is_constant(l, 0.0)) return r;
      if (is_constant(r, 0.0)) return l;
      break;
    case BinaryOp::sub:
      if (is_constant(r, 0.0)) return l;
      if (is_constant(l, 0.0)) return fold_negate(std::move(r));
      break;
    case BinaryOp::mul:
      if (is_constant(l, 0.0) || is_constant(r, 0.0)) return constant(0.0);
      if (is_constant(l, 1.0)) return r;
      if (is_constant(r, 1.0)) return l;
      break;
    case BinaryOp::div:
      if (is_constant(l, 0.0)) return constant(0.0);
      if (is_constant(r, 1.0)) return l;
      break;
    case BinaryOp::pow:
      if (is_constant(r, 0.0)) return constant(1.0);
      if (is_constant(r, 1.0)) return l;
      break;
  }
  return binary(op, std::move(l), std::move(r));
}

inline NodePtr fold_call(Function f, std::vector<NodePtr> args) {
  bool all_const = true;
  for (const auto& a : args) all_const = all_const && constant_value(a).has_value();
  if (all_const) {
    const double v = apply(f, *constant_value(args[0]), args.size() > 1 ? *constant_value(args[1]) : 0.0);
    if (std::isfinite(v)) return constant(v);
  }
  return call(f, std::move(args));
}

}  // namespace build

namespace detail {

// Binding strength used for rendering: sums 1, products 2, negation 3,
// powers 4, atoms 5.
inline int precedence(const Node& n) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return v.value < 0 || std::signbit(v.value) ? 3 : 5;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return 3;
        } else if constexpr (std::is_same_v<T, Binary>) {
          switch (v.op) {
            case BinaryOp::add:
            case BinaryOp::sub: return 1;
            case BinaryOp::mul:
            case BinaryOp::div: return 2;
            case BinaryOp::pow: return 4;
          }
          return 0;
        } else {
          return 5;
        }
      },
      n.data);
}

inline void render(const Node& n, std::string& out);

inline void render_child(const Node& child, bool wrap, std::string& out) {
  if (wrap) out += '(';
  render(child, out);
  if (wrap) out += ')';
}

inline void render(const Node& n, std::string& out) {
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>) {
          if (std::signbit(v.value)) {
            out += '-';
            out += format_real(-v.value);
          } else {
            out += format_real(v.value);
          }
        } else if constexpr (std::is_same_v<T, Variable>) {
          out += v.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += '-';
          render_child(*v.child, precedence(*v.child) < 3, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          static constexpr std::string_view symbols = "+-*/^";
          const int p = precedence(Node{v});
          const int lp = precedence(*v.lhs);
          const int rp = precedence(*v.rhs);
          if (v.op == BinaryOp::pow) {
            render_child(*v.lhs, lp <= p, out);
            out += '^';
            render_child(*v.rhs, rp < p, out);
          } else {
            render_child(*v.lhs, lp < p, out);
            out += symbols[static_cast<std::size_t>(v.op)];
            render_child(*v.rhs, rp <= p, out);
          }
        } else {
          out += function_name(v.function);
          out += '(';
          for (std::size_t i = 0; i < v.args.size(); ++i) {
            if (i) out += ',';
            render(*v.args[i], out);
          }
          out += ')';
        }
      },
      n.data);
}

inline bool equal(const Node& a, const Node& b) {
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&b](const auto& va) -> bool {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b.data);
        if constexpr (std::is_same_v<T, Constant>) {
          return va.value == vb.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return va.name == vb.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return equal(*va.child, *vb.child);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return va.op == vb.op && equal(*va.lhs, *vb.lhs) && equal(*va.rhs, *vb.rhs);
        } else {
          if (va.function != vb.function || va.args.size() != vb.args.size()) return false;
          for (std::size_t i = 0; i < va.args.size(); ++i) {
            if (!equal(*va.args[i], *vb.args[i])) return false;
          }
          return true;
        }
      },
      a.data);
}

inline void collect_variables(const Node& n, std::set<std::string>& out) {
  std::visit(
      [&out](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Variable>) {
          out.insert(v.name);
        } else if constexpr (std::is_same_v<T, Negate>) {
          collect_variables(*v.child, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_variables(*v.lhs, out);
          collect_variables(*v.rhs, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : v.args) collect_variables(*a, out);
        }
      },
      n.data);
}

inline std::string render(const Node& n) {
  std::string s;
  render(n, s);
  return s;
}

template <class Lookup>
double eval(const Node& n, const Lookup& lookup) {
  const double value = std::visit(
      [&lookup](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return v.value;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return lookup(v.name);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval(*v.child, lookup);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const double l = eval(*v.lhs, lookup);
          const double r = eval(*v.rhs, lookup);
          return build::apply(v.op, l, r);
        } else {
          const double a0 = eval(*v.args[0], lookup);
          const double a1 = v.args.size() > 1 ? eval(*v.args[1], lookup) : 0.0;
          return build::apply(v.function, a0, a1);
        }
      },
      n.data);
  if (!std::isfinite(value)) {
    throw EvalError(EvalError::Kind::domain, "non-finite result in '" + render(n) + "'");
  }
  return value;
}

}  // namespace detail

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  Expr() : root_(build::constant(0.0)) {}
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  const NodePtr& node() const { return root_; }

  double evaluate(const Bindings& bindings) const {
    return detail::eval(*root_, [&bindings](const std::string& name) {
      auto it = bindings.find(name);
      if (it == bindings.end()) {
        throw EvalError(EvalError::Kind::unbound_variable, "unbound variable '" + name + "'");
      }
      return it->second;
    });
  }

  /// Evaluates with a single bound variable.
  double evaluate(std::string_view var, double value) const {
    return detail::eval(*root_, [var, value](const std::string& name) {
      if (name != var) {
        throw EvalError(EvalError::Kind::unbound_variable, "unbound variable '" + name + "'");
      }
      return value;
    });
  }

  Expr derivative(std::string_view var) const;

  std::string to_string() const { return detail::render(*root_); }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    detail::collect_variables(*root_, out);
    return out;
  }

  bool depends_on(std::string_view var) const { return variables().count(std::string(var)) > 0; }

  /// True when the whole expression is the bare variable `name`.
  bool is_variable(std::string_view name) const {
    const auto* v = std::get_if<Variable>(&root_->data);
    return v && v->name == name;
  }

  friend bool operator==(const Expr& a, const Expr& b) { return detail::equal(*a.root_, *b.root_); }

 private:
  NodePtr root_;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view source, std::optional<std::string_view> variable)
      : tokens_(tokenize(source)), end_(source.size()), variable_(variable) {}

  Expr run() {
    if (tokens_.empty()) throw ParseError(ParseError::Kind::syntax, 0, "empty expression");
    NodePtr root = parse_expr();
    if (pos_ < tokens_.size()) fail("unexpected '" + tokens_[pos_].lexeme + "'");
    return Expr(std::move(root));
  }

 private:
  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }
  std::size_t here() const { return pos_ < tokens_.size() ? tokens_[pos_].position : end_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(ParseError::Kind::syntax, here(), what);
  }

  bool accept_op(char op) {
    const Token* t = peek();
    if (t && t->kind == TokenKind::op && t->lexeme[0] == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept(TokenKind kind) {
    const Token* t = peek();
    if (t && t->kind == kind) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept_op('+')) {
        lhs = build::binary(BinaryOp::add, lhs, parse_term());
      } else if (accept_op('-')) {
        lhs = build::binary(BinaryOp::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept_op('*')) {
        lhs = build::binary(BinaryOp::mul, lhs, parse_unary());
      } else if (accept_op('/')) {
        lhs = build::binary(BinaryOp::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept_op('-')) return build::negate(parse_unary());
    if (accept_op('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept_op('^')) return build::binary(BinaryOp::pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    const Token* t = peek();
    if (!t) fail("unexpected end of expression");
    switch (t->kind) {
      case TokenKind::number:
        ++pos_;
        return build::constant(parse_real(t->lexeme));
      case TokenKind::left_paren: {
        ++pos_;
        NodePtr inner = parse_expr();
        if (!accept(TokenKind::right_paren)) fail("expected ')'");
        return inner;
      }
      case TokenKind::identifier:
        return parse_identifier();
      default:
        fail("unexpected '" + t->lexeme + "'");
    }
  }

  NodePtr parse_identifier() {
    const Token& t = tokens_[pos_++];
    const Token* next = peek();
    if (next && next->kind == TokenKind::left_paren) {
      auto f = function_from_name(t.lexeme);
      if (!f) throw ParseError(ParseError::Kind::unknown_function, t.position, "unknown function '" + t.lexeme + "'");
      ++pos_;
      std::vector<NodePtr> args;
      if (!accept(TokenKind::right_paren)) {
        args.push_back(parse_expr());
        while (accept(TokenKind::comma)) args.push_back(parse_expr());
        if (!accept(TokenKind::right_paren)) fail("expected ')' or ','");
      }
      if (args.size() != function_arity(*f)) {
        throw ParseError(ParseError::Kind::arity, t.position,
                         std::string(function_name(*f)) + " takes " + std::to_string(function_arity(*f)) +
                             " argument(s), got " + std::to_string(args.size()));
      }
      return build::call(*f, std::move(args));
    }
    if (t.lexeme == "pi") return build::constant(std::numbers::pi);
    if (t.lexeme == "e") return build::constant(std::numbers::e);
    if (function_from_name(t.lexeme)) {
      throw ParseError(ParseError::Kind::syntax, t.position, "function '" + t.lexeme + "' needs an argument list");
    }
    if (variable_ && t.lexeme != *variable_) {
      throw ParseError(ParseError::Kind::unknown_variable, t.position,
                       "unknown variable '" + t.lexeme + "' (expected '" + std::string(*variable_) + "')");
    }
    return build::variable(t.lexeme);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t end_;
  std::optional<std::string_view> variable_;
};

inline NodePtr differentiate(const NodePtr& n, std::string_view var);

inline bool depends_on(const Node& n, std::string_view var) {
  std::set<std::string> vars;
  collect_variables(n, vars);
  return vars.count(std::string(var)) > 0;
}

// d(f^g) for the general case: f^g * (g' * log f + g * f' / f).
inline NodePtr power_rule(const NodePtr& base, const NodePtr& exponent, std::string_view var) {
  using build::fold_binary;
  const NodePtr db = differentiate(base, var);
  if (!depends_on(*exponent, var)) {
    // c * f^(c-1) * f'
    NodePtr lowered = fold_binary(BinaryOp::sub, exponent, build::constant(1.0));
    NodePtr p = fold_binary(BinaryOp::pow, base, lowered);
    return fold_binary(BinaryOp::mul, fold_binary(BinaryOp::mul, exponent, p), db);
  }
  const NodePtr de = differentiate(exponent, var);
  NodePtr log_base = build::fold_call(Function::log, {base});
  NodePtr term1 = fold_binary(BinaryOp::mul, de, log_base);
  NodePtr term2 = fold_binary(BinaryOp::div, fold_binary(BinaryOp::mul, exponent, db), base);
  NodePtr whole = fold_binary(BinaryOp::pow, base, exponent);
  return fold_binary(BinaryOp::mul, whole, fold_binary(BinaryOp::add, term1, term2));
}

inline NodePtr differentiate(const NodePtr& n, std::string_view var) {
  using build::constant;
  using build::fold_binary;
  using build::fold_call;
  using build::fold_negate;
  return std::visit(
      [&](const auto& v) -> NodePtr {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return constant(0.0);
        } else if constexpr (std::is_same_v<T, Variable>) {
          return constant(v.name == var ? 1.0 : 0.0);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return fold_negate(differentiate(v.child, var));
        } else if constexpr (std::is_same_v<T, Binary>) {
          switch (v.op) {
            case BinaryOp::add:
            case BinaryOp::sub:
              return fold_binary(v.op, differentiate(v.lhs, var), differentiate(v.rhs, var));
            case BinaryOp::mul:
              return fold_binary(BinaryOp::add, fold_binary(BinaryOp::mul, differentiate(v.lhs, var), v.rhs),
                                 fold_binary(BinaryOp::mul, v.lhs, differentiate(v.rhs, var)));
            case BinaryOp::div: {
              NodePtr num = fold_binary(BinaryOp::sub, fold_binary(BinaryOp::mul, differentiate(v.lhs, var), v.rhs),
                                        fold_binary(BinaryOp::mul, v.lhs, differentiate(v.rhs, var)));
              return fold_binary(BinaryOp::div, num, fold_binary(BinaryOp::pow, v.rhs, constant(2.0)));
            }
            case BinaryOp::pow:
              return power_rule(v.lhs, v.rhs, var);
          }
          return constant(0.0);
        } else {
          const NodePtr& u = v.args[0];
          if (v.function == Function::pow) return power_rule(u, v.args[1], var);
          const NodePtr du = differentiate(u, var);
          NodePtr outer;
          switch (v.function) {
            case Function::sin: outer = fold_call(Function::cos, {u}); break;
            case Function::cos: outer = fold_negate(fold_call(Function::sin, {u})); break;
            case Function::tan:
              outer = fold_binary(BinaryOp::div, constant(1.0),
                                  fold_binary(BinaryOp::pow, fold_call(Function::cos, {u}), constant(2.0)));
              break;
            case Function::exp: outer = fold_call(Function::exp, {u}); break;
            case Function::log: outer = fold_binary(BinaryOp::div, constant(1.0), u); break;
            case Function::sqrt:
              outer = fold_binary(BinaryOp::div, constant(0.5), fold_call(Function::sqrt, {u}));
              break;
            case Function::abs: outer = fold_binary(BinaryOp::div, u, fold_call(Function::abs, {u})); break;
            case Function::pow: break;
          }
          return fold_binary(BinaryOp::mul, outer, du);
        }
      },
      n->data);
}

}  // namespace detail

inline Expr Expr::derivative(std::string_view var) const { return Expr(detail::differentiate(root_, var)); }

/// Parses an expression with any free variables.
inline Expr parse(std::string_view source) { return detail::Parser(source, std::nullopt).run(); }

/// Parses an expression whose only permitted free variable is `variable`.
inline Expr parse(std::string_view source, std::string_view variable) {
  return detail::Parser(source, variable).run();
}

inline double evaluate(const Expr& ast, const Bindings& bindings) { return ast.evaluate(bindings); }

inline Expr differentiate(const Expr& ast, std::string_view var) { return ast.derivative(var); }

}  // namespace abeltc::expr
