#include "lpsym/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace lpsym {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

UndeclaredIdentifier::UndeclaredIdentifier(std::string name)
    : Error("undeclared identifier '" + name + "'"), name_(std::move(name)) {}

DomainError::DomainError(const std::string& what, std::string subexpression)
    : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}

namespace {

struct FnInfo {
  Fn fn;
  std::string_view name;
  int arity;
};

constexpr std::array<FnInfo, 8> kFunctions{{
    {Fn::Sin, "sin", 1},
    {Fn::Cos, "cos", 1},
    {Fn::Tan, "tan", 1},
    {Fn::Exp, "exp", 1},
    {Fn::Log, "log", 1},
    {Fn::Sqrt, "sqrt", 1},
    {Fn::Atan, "atan", 1},
    {Fn::Atan2, "atan2", 2},
}};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool valid_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), is_ident_char);
}

std::shared_ptr<const std::vector<std::string>> checked_vars(std::vector<std::string> names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!valid_identifier(names[i])) throw Error("invalid variable name '" + names[i] + "'");
    if (function_from_name(names[i])) throw Error("variable name '" + names[i] + "' shadows a function");
    for (std::size_t j = 0; j < i; ++j) {
      if (names[i] == names[j]) throw Error("duplicate variable name '" + names[i] + "'");
    }
  }
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr raw_unary(Op op, NodePtr a) {
  Node n;
  n.op = op;
  n.lhs = std::move(a);
  return make(std::move(n));
}

NodePtr raw_binary(Op op, NodePtr a, NodePtr b) {
  Node n;
  n.op = op;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return make(std::move(n));
}

NodePtr raw_call(Fn fn, NodePtr a, NodePtr b) {
  Node n;
  n.op = Op::Call;
  n.fn = fn;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return make(std::move(n));
}

std::optional<double> const_of(const NodePtr& n) {
  if (n && n->op == Op::Const) return n->value;
  return std::nullopt;
}

bool has_vars(const NodePtr& n) {
  if (!n) return false;
  if (n->op == Op::Var) return true;
  return has_vars(n->lhs) || has_vars(n->rhs);
}

// Applies a unary function without domain checks; caller validates.
double apply_fn(Fn fn, double a, double b) {
  switch (fn) {
    case Fn::Sin: return std::sin(a);
    case Fn::Cos: return std::cos(a);
    case Fn::Tan: return std::tan(a);
    case Fn::Exp: return std::exp(a);
    case Fn::Log: return std::log(a);
    case Fn::Sqrt: return std::sqrt(a);
    case Fn::Atan: return std::atan(a);
    case Fn::Atan2: return std::atan2(a, b);
  }
  return 0.0;
}

bool fn_domain_ok(Fn fn, double a, double b) {
  switch (fn) {
    case Fn::Log: return a > 0.0;
    case Fn::Sqrt: return a >= 0.0;
    case Fn::Atan2: return !(a == 0.0 && b == 0.0);
    default: return true;
  }
}

// ---------------------------------------------------------------------------
// Printing

int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return n.value < 0.0 || std::signbit(n.value) ? 3 : 5;
    case Op::Var:
    case Op::Call: return 5;
  }
  return 5;
}

void format_number(double v, std::string& out) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), end);
}

void print(const Node& n, const std::vector<std::string>& vars, std::string& out);

void print_operand(const Node& n, int min_prec, const std::vector<std::string>& vars, std::string& out) {
  if (precedence(n) < min_prec) {
    out += '(';
    print(n, vars, out);
    out += ')';
  } else {
    print(n, vars, out);
  }
}

void print(const Node& n, const std::vector<std::string>& vars, std::string& out) {
  switch (n.op) {
    case Op::Const:
      format_number(n.value, out);
      return;
    case Op::Var:
      out += vars.at(n.var);
      return;
    case Op::Neg:
      out += '-';
      print_operand(*n.lhs, 3, vars, out);
      return;
    case Op::Add:
    case Op::Sub:
      print_operand(*n.lhs, 1, vars, out);
      out += n.op == Op::Add ? " + " : " - ";
      print_operand(*n.rhs, 2, vars, out);
      return;
    case Op::Mul:
    case Op::Div:
      print_operand(*n.lhs, 2, vars, out);
      out += n.op == Op::Mul ? '*' : '/';
      print_operand(*n.rhs, 3, vars, out);
      return;
    case Op::Pow:
      print_operand(*n.lhs, 5, vars, out);
      out += '^';
      print_operand(*n.rhs, 3, vars, out);
      return;
    case Op::Call:
      out += function_name(n.fn);
      out += '(';
      print(*n.lhs, vars, out);
      if (n.rhs) {
        out += ", ";
        print(*n.rhs, vars, out);
      }
      out += ')';
      return;
  }
}

std::string to_text(const NodePtr& n, const std::vector<std::string>& vars) {
  std::string out;
  print(*n, vars, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

class Evaluator {
 public:
  Evaluator(std::span<const double> values, const std::vector<std::string>& vars)
      : values_(values), vars_(vars) {}

  double operator()(const NodePtr& p) const {
    const Node& n = *p;
    switch (n.op) {
      case Op::Const: return n.value;
      case Op::Var: return values_[n.var];
      case Op::Neg: return -(*this)(n.lhs);
      case Op::Add: return (*this)(n.lhs) + (*this)(n.rhs);
      case Op::Sub: return (*this)(n.lhs) - (*this)(n.rhs);
      case Op::Mul: return (*this)(n.lhs) * (*this)(n.rhs);
      case Op::Div: {
        const double num = (*this)(n.lhs);
        const double den = (*this)(n.rhs);
        if (den == 0.0) throw DomainError("division by zero", to_text(p, vars_));
        return num / den;
      }
      case Op::Pow: {
        const double base = (*this)(n.lhs);
        const double expo = (*this)(n.rhs);
        if (base == 0.0 && expo < 0.0) throw DomainError("division by zero", to_text(p, vars_));
        if (base < 0.0 && std::trunc(expo) != expo) {
          throw DomainError("negative base with non-integer exponent", to_text(p, vars_));
        }
        return std::pow(base, expo);
      }
      case Op::Call: {
        const double a = (*this)(n.lhs);
        const double b = n.rhs ? (*this)(n.rhs) : 0.0;
        if (!fn_domain_ok(n.fn, a, b)) {
          throw DomainError(std::string(function_name(n.fn)) + " argument out of domain", to_text(p, vars_));
        }
        return apply_fn(n.fn, a, b);
      }
    }
    return 0.0;
  }

 private:
  std::span<const double> values_;
  const std::vector<std::string>& vars_;
};

// ---------------------------------------------------------------------------
// Parsing

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) {
      ++pos_;
    }
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return {Tok::End, start, {}};
    const char c = src_[pos_];
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) return number(start);
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      return {Tok::Ident, start, src_.substr(start, pos_ - start)};
    }
    ++pos_;
    switch (c) {
      case '+': return {Tok::Plus, start, src_.substr(start, 1)};
      case '-': return {Tok::Minus, start, src_.substr(start, 1)};
      case '*': return {Tok::Star, start, src_.substr(start, 1)};
      case '/': return {Tok::Slash, start, src_.substr(start, 1)};
      case '^': return {Tok::Caret, start, src_.substr(start, 1)};
      case '(': return {Tok::LParen, start, src_.substr(start, 1)};
      case ')': return {Tok::RParen, start, src_.substr(start, 1)};
      case ',': return {Tok::Comma, start, src_.substr(start, 1)};
      default: throw ParseError("unexpected character", start);
    }
  }

 private:
  Token number(std::size_t start) {
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && is_digit(src_[p])) {
        while (p < src_.size() && is_digit(src_[p])) ++p;
        pos_ = p;
      }
    }
    const std::string_view text = src_.substr(start, pos_ - start);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw ParseError("malformed number", start);
    return {Tok::Number, start, text, value};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// expr    := term (('+' | '-') term)*
// term    := unary (('*' | '/') unary)*
// unary   := '-' unary | power
// power   := primary ('^' unary)?
// primary := number | ident | ident '(' expr (',' expr)? ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : lexer_(src), vars_(vars) {
    advance();
  }

  NodePtr parse_all() {
    NodePtr root = expr();
    if (tok_.kind != Tok::End) fail_unexpected();
    return root;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  [[noreturn]] void fail_unexpected() const {
    if (tok_.kind == Tok::End) throw ParseError("unexpected end of input", tok_.offset);
    throw ParseError("unexpected '" + std::string(tok_.text) + "'", tok_.offset);
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) {
      if (tok_.kind == Tok::End) throw ParseError(std::string("expected ") + what, tok_.offset);
      fail_unexpected();
    }
    advance();
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const Op op = tok_.kind == Tok::Plus ? Op::Add : Op::Sub;
      advance();
      lhs = raw_binary(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const Op op = tok_.kind == Tok::Star ? Op::Mul : Op::Div;
      advance();
      lhs = raw_binary(op, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return raw_unary(Op::Neg, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (tok_.kind == Tok::Caret) {
      advance();
      return raw_binary(Op::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    switch (tok_.kind) {
      case Tok::Number: {
        NodePtr n = node::constant(tok_.number);
        advance();
        return n;
      }
      case Tok::LParen: {
        advance();
        NodePtr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: return identifier();
      default: fail_unexpected();
    }
  }

  NodePtr identifier() {
    const Token id = tok_;
    advance();
    if (tok_.kind == Tok::LParen) {
      const auto fn = function_from_name(id.text);
      if (!fn) throw UndeclaredIdentifier(std::string(id.text));
      advance();
      NodePtr a = expr();
      NodePtr b;
      if (tok_.kind == Tok::Comma) {
        if (function_arity(*fn) != 2) throw ParseError(std::string(id.text) + " takes one argument", tok_.offset);
        advance();
        b = expr();
      } else if (function_arity(*fn) == 2) {
        throw ParseError(std::string(id.text) + " takes two arguments", tok_.offset);
      }
      expect(Tok::RParen, "')'");
      return raw_call(*fn, std::move(a), std::move(b));
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == id.text) return node::variable(i);
    }
    if (id.text == "pi") return node::constant(std::numbers::pi);
    throw UndeclaredIdentifier(std::string(id.text));
  }

  Lexer lexer_;
  const std::vector<std::string>& vars_;
  Token tok_{Tok::End, 0, {}};
};

// ---------------------------------------------------------------------------
// Differentiation

NodePtr d(const NodePtr& p, std::size_t var) {
  using namespace node;
  const Node& n = *p;
  switch (n.op) {
    case Op::Const: return constant(0.0);
    case Op::Var: return constant(n.var == var ? 1.0 : 0.0);
    case Op::Neg: return neg(d(n.lhs, var));
    case Op::Add: return add(d(n.lhs, var), d(n.rhs, var));
    case Op::Sub: return sub(d(n.lhs, var), d(n.rhs, var));
    case Op::Mul: return add(mul(d(n.lhs, var), n.rhs), mul(n.lhs, d(n.rhs, var)));
    case Op::Div: {
      NodePtr du = d(n.lhs, var);
      NodePtr dv = d(n.rhs, var);
      if (is_const(dv, 0.0)) return div(du, n.rhs);
      return sub(div(du, n.rhs), div(mul(n.lhs, dv), pow(n.rhs, constant(2.0))));
    }
    case Op::Pow: {
      NodePtr du = d(n.lhs, var);
      NodePtr dv = d(n.rhs, var);
      if (is_const(dv, 0.0)) {
        return mul(mul(n.rhs, pow(n.lhs, sub(n.rhs, constant(1.0)))), du);
      }
      NodePtr log_base = call(Fn::Log, n.lhs);
      if (is_const(du, 0.0)) return mul(mul(p, log_base), dv);
      return mul(p, add(mul(dv, log_base), div(mul(n.rhs, du), n.lhs)));
    }
    case Op::Call: {
      NodePtr du = d(n.lhs, var);
      const NodePtr& u = n.lhs;
      switch (n.fn) {
        case Fn::Sin: return mul(call(Fn::Cos, u), du);
        case Fn::Cos: return neg(mul(call(Fn::Sin, u), du));
        case Fn::Tan: return div(du, pow(call(Fn::Cos, u), constant(2.0)));
        case Fn::Exp: return mul(p, du);
        case Fn::Log: return div(du, u);
        case Fn::Sqrt: return div(du, mul(constant(2.0), p));
        case Fn::Atan: return div(du, add(constant(1.0), pow(u, constant(2.0))));
        case Fn::Atan2: {
          // atan2(y, x): (x dy - y dx) / (x^2 + y^2)
          const NodePtr& x = n.rhs;
          NodePtr dx = d(x, var);
          NodePtr num = sub(mul(x, du), mul(u, dx));
          if (is_const(num, 0.0)) return constant(0.0);
          return div(num, add(pow(x, constant(2.0)), pow(u, constant(2.0))));
        }
      }
    }
  }
  return constant(0.0);
}

std::shared_ptr<const std::vector<std::string>> merged_vars(const Expression& a, const Expression& b) {
  if (a.varnames() == b.varnames()) return nullptr;
  if (!has_vars(b.root())) return nullptr;
  if (!has_vars(a.root())) return std::make_shared<const std::vector<std::string>>(b.varnames());
  throw Error("cannot combine expressions over different variable lists");
}

template <class F>
Expression combine(const Expression& a, const Expression& b, F f) {
  auto vars = merged_vars(a, b);
  NodePtr root = f(a.root(), b.root());
  if (!vars) return a.with_root(std::move(root));
  return Expression::constant(0.0, *vars).with_root(std::move(root));
}

}  // namespace

std::string_view function_name(Fn fn) noexcept {
  for (const auto& f : kFunctions) {
    if (f.fn == fn) return f.name;
  }
  return "?";
}

int function_arity(Fn fn) noexcept { return fn == Fn::Atan2 ? 2 : 1; }

std::optional<Fn> function_from_name(std::string_view name) noexcept {
  for (const auto& f : kFunctions) {
    if (f.name == name) return f.fn;
  }
  return std::nullopt;
}

namespace node {

NodePtr constant(double value) {
  Node n;
  n.op = Op::Const;
  n.value = value;
  return make(std::move(n));
}

NodePtr variable(std::size_t index) {
  Node n;
  n.op = Op::Var;
  n.var = index;
  return make(std::move(n));
}

bool is_const(const NodePtr& n, double value) noexcept {
  return n && n->op == Op::Const && n->value == value;
}

NodePtr neg(NodePtr a) {
  if (auto c = const_of(a)) return constant(-*c);
  if (a->op == Op::Neg) return a->lhs;
  return raw_unary(Op::Neg, std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
  const auto ca = const_of(a);
  const auto cb = const_of(b);
  if (ca && cb) return constant(*ca + *cb);
  if (ca && *ca == 0.0) return b;
  if (cb && *cb == 0.0) return a;
  return raw_binary(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  const auto ca = const_of(a);
  const auto cb = const_of(b);
  if (ca && cb) return constant(*ca - *cb);
  if (cb && *cb == 0.0) return a;
  if (ca && *ca == 0.0) return neg(std::move(b));
  return raw_binary(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  const auto ca = const_of(a);
  const auto cb = const_of(b);
  if (ca && cb) return constant(*ca * *cb);
  if ((ca && *ca == 0.0) || (cb && *cb == 0.0)) return constant(0.0);
  if (ca && *ca == 1.0) return b;
  if (cb && *cb == 1.0) return a;
  return raw_binary(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  const auto ca = const_of(a);
  const auto cb = const_of(b);
  if (ca && cb && *cb != 0.0) return constant(*ca / *cb);
  if (ca && *ca == 0.0 && !(cb && *cb == 0.0)) return constant(0.0);
  if (cb && *cb == 1.0) return a;
  return raw_binary(Op::Div, std::move(a), std::move(b));
}

NodePtr pow(NodePtr a, NodePtr b) {
  const auto ca = const_of(a);
  const auto cb = const_of(b);
  if (cb && *cb == 0.0) return constant(1.0);
  if (cb && *cb == 1.0) return a;
  if (ca && cb) {
    const double v = std::pow(*ca, *cb);
    if (std::isfinite(v)) return constant(v);
  }
  return raw_binary(Op::Pow, std::move(a), std::move(b));
}

NodePtr call(Fn fn, NodePtr a, NodePtr b) {
  const auto ca = const_of(a);
  const bool b_ok = function_arity(fn) == 1 || const_of(b).has_value();
  if (ca && b_ok) {
    const double bv = b ? b->value : 0.0;
    if (fn_domain_ok(fn, *ca, bv)) {
      const double v = apply_fn(fn, *ca, bv);
      if (std::isfinite(v)) return constant(v);
    }
  }
  return raw_call(fn, std::move(a), std::move(b));
}

bool equal(const NodePtr& a, const NodePtr& b) noexcept {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::Const: return a->value == b->value && std::signbit(a->value) == std::signbit(b->value);
    case Op::Var: return a->var == b->var;
    case Op::Call:
      if (a->fn != b->fn) return false;
      [[fallthrough]];
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

}  // namespace node

Expression::Expression()
    : root_(node::constant(0.0)), vars_(std::make_shared<const std::vector<std::string>>()) {}

Expression Expression::constant(double value, std::vector<std::string> varnames) {
  return Expression(node::constant(value), checked_vars(std::move(varnames)));
}

Expression Expression::variable(std::string_view name, std::vector<std::string> varnames) {
  auto vars = checked_vars(std::move(varnames));
  for (std::size_t i = 0; i < vars->size(); ++i) {
    if ((*vars)[i] == name) return Expression(node::variable(i), vars);
  }
  throw UndeclaredIdentifier(std::string(name));
}

std::optional<std::size_t> Expression::index_of(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    if ((*vars_)[i] == name) return i;
  }
  return std::nullopt;
}

double Expression::eval(std::span<const double> values) const {
  if (values.size() != vars_->size()) {
    throw Error("expected " + std::to_string(vars_->size()) + " values, got " + std::to_string(values.size()));
  }
  return Evaluator(values, *vars_)(root_);
}

double Expression::eval(const std::map<std::string, double, std::less<>>& bindings) const {
  std::vector<double> values(vars_->size());
  for (std::size_t i = 0; i < vars_->size(); ++i) {
    auto it = bindings.find((*vars_)[i]);
    if (it == bindings.end()) throw Error("no binding for variable '" + (*vars_)[i] + "'");
    values[i] = it->second;
  }
  return eval(values);
}

bool Expression::is_constant() const noexcept { return root_->op == Op::Const; }

std::optional<double> Expression::constant_value() const noexcept { return const_of(root_); }

bool Expression::is_zero() const noexcept { return node::is_const(root_, 0.0); }

std::string Expression::str() const { return to_text(root_, *vars_); }

bool Expression::structurally_equal(const Expression& other) const noexcept {
  return *vars_ == *other.vars_ && node::equal(root_, other.root_);
}

Expression operator+(const Expression& a, const Expression& b) { return combine(a, b, node::add); }
Expression operator-(const Expression& a, const Expression& b) { return combine(a, b, node::sub); }
Expression operator*(const Expression& a, const Expression& b) { return combine(a, b, node::mul); }
Expression operator/(const Expression& a, const Expression& b) { return combine(a, b, node::div); }
Expression operator-(const Expression& a) { return a.with_root(node::neg(a.root())); }
Expression operator+(const Expression& a, double b) { return a.with_root(node::add(a.root(), node::constant(b))); }
Expression operator+(double a, const Expression& b) { return b.with_root(node::add(node::constant(a), b.root())); }
Expression operator-(const Expression& a, double b) { return a.with_root(node::sub(a.root(), node::constant(b))); }
Expression operator-(double a, const Expression& b) { return b.with_root(node::sub(node::constant(a), b.root())); }
Expression operator*(const Expression& a, double b) { return a.with_root(node::mul(a.root(), node::constant(b))); }
Expression operator*(double a, const Expression& b) { return b.with_root(node::mul(node::constant(a), b.root())); }
Expression operator/(const Expression& a, double b) { return a.with_root(node::div(a.root(), node::constant(b))); }
Expression operator/(double a, const Expression& b) { return b.with_root(node::div(node::constant(a), b.root())); }
Expression pow(const Expression& base, const Expression& exponent) { return combine(base, exponent, node::pow); }
Expression pow(const Expression& base, double exponent) {
  return base.with_root(node::pow(base.root(), node::constant(exponent)));
}
Expression apply(Fn fn, const Expression& arg) {
  if (function_arity(fn) != 1) throw Error(std::string(function_name(fn)) + " takes two arguments");
  return arg.with_root(node::call(fn, arg.root()));
}
Expression atan2(const Expression& y, const Expression& x) {
  return combine(y, x, [](NodePtr a, NodePtr b) { return node::call(Fn::Atan2, std::move(a), std::move(b)); });
}

Expression parse(std::string_view src, std::vector<std::string> varnames) {
  if (varnames.empty()) throw Error("expression needs at least one declared variable");
  auto vars = checked_vars(std::move(varnames));
  NodePtr root = Parser(src, *vars).parse_all();
  return Expression::constant(0.0, *vars).with_root(std::move(root));
}

Expression derive(const Expression& e, std::string_view var, int order) {
  if (order < 1 || order > 3) throw Error("derivative order must be between 1 and 3");
  const auto index = e.index_of(var);
  if (!index) throw UndeclaredIdentifier(std::string(var));
  NodePtr root = e.root();
  for (int i = 0; i < order; ++i) root = d(root, *index);
  return e.with_root(std::move(root));
}

double eval(const Expression& e, const std::map<std::string, double, std::less<>>& bindings) {
  return e.eval(bindings);
}

std::string unparse(const Expression& e) { return e.str(); }

namespace {

NodePtr remap(const NodePtr& p, std::span<const std::size_t> index_map) {
  if (!p) return nullptr;
  switch (p->op) {
    case Op::Const: return p;
    case Op::Var: return node::variable(index_map[p->var]);
    default: {
      Node n = *p;
      n.lhs = remap(p->lhs, index_map);
      n.rhs = remap(p->rhs, index_map);
      return make(std::move(n));
    }
  }
}

}  // namespace

Expression rebind(const Expression& e, std::vector<std::string> varnames, std::span<const std::size_t> index_map) {
  if (index_map.size() != e.varnames().size()) throw Error("rebind needs one target index per variable");
  for (std::size_t i : index_map) {
    if (i >= varnames.size()) throw Error("rebind target index out of range");
  }
  return Expression::constant(0.0, std::move(varnames)).with_root(remap(e.root(), index_map));
}

}  // namespace lpsym
