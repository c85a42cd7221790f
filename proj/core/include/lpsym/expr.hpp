#pragma once

// Scalar expressions over a declared, ordered set of real variables.
//
// Expressions are immutable trees of shared nodes. They can be parsed from
// text, evaluated, printed back, and differentiated symbolically. The grammar
// is documented in docs/expression-grammar.md.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpsym/error.hpp"

namespace lpsym {

/// Version of the accepted grammar and function list.
inline constexpr int kGrammarVersion = 1;

enum class Op : std::uint8_t { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Fn : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt, Atan, Atan2 };

std::string_view function_name(Fn fn) noexcept;
int function_arity(Fn fn) noexcept;
std::optional<Fn> function_from_name(std::string_view name) noexcept;

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  double value = 0.0;     // Op::Const
  std::size_t var = 0;    // Op::Var, index into the variable list
  Fn fn = Fn::Sin;        // Op::Call
  NodePtr lhs;            // unary operand, left operand, first call argument
  NodePtr rhs;            // right operand, second call argument (atan2)
};

class Expression {
 public:
  /// The constant zero over no variables.
  Expression();

  static Expression constant(double value, std::vector<std::string> varnames);
  static Expression variable(std::string_view name, std::vector<std::string> varnames);

  const std::vector<std::string>& varnames() const noexcept { return *vars_; }
  const NodePtr& root() const noexcept { return root_; }

  /// Index of `name` in the variable list, or nullopt.
  std::optional<std::size_t> index_of(std::string_view name) const noexcept;

  /// Evaluates with positional values, one per declared variable.
  double eval(std::span<const double> values) const;
  double eval(const std::map<std::string, double, std::less<>>& bindings) const;
  double operator()(std::initializer_list<double> values) const {
    return eval(std::span<const double>(values.begin(), values.size()));
  }

  bool is_constant() const noexcept;
  std::optional<double> constant_value() const noexcept;
  bool is_zero() const noexcept;

  /// Text form that parses back to a structurally identical tree.
  std::string str() const;

  /// Same tree, same variable list.
  bool structurally_equal(const Expression& other) const noexcept;

  Expression with_root(NodePtr root) const { return Expression(std::move(root), vars_); }

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);
  friend Expression operator+(const Expression& a, double b);
  friend Expression operator+(double a, const Expression& b);
  friend Expression operator-(const Expression& a, double b);
  friend Expression operator-(double a, const Expression& b);
  friend Expression operator*(const Expression& a, double b);
  friend Expression operator*(double a, const Expression& b);
  friend Expression operator/(const Expression& a, double b);
  friend Expression operator/(double a, const Expression& b);
  friend Expression pow(const Expression& base, const Expression& exponent);
  friend Expression pow(const Expression& base, double exponent);
  friend Expression apply(Fn fn, const Expression& arg);
  friend Expression atan2(const Expression& y, const Expression& x);

 private:
  Expression(NodePtr root, std::shared_ptr<const std::vector<std::string>> vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}

  NodePtr root_;
  std::shared_ptr<const std::vector<std::string>> vars_;
};

/// Parses `src` over `varnames` (non-empty, distinct identifiers).
/// Throws ParseError (with byte offset) or UndeclaredIdentifier.
Expression parse(std::string_view src, std::vector<std::string> varnames);

/// Symbolic derivative of order 1..3 with respect to `var`.
Expression derive(const Expression& e, std::string_view var, int order = 1);

/// Evaluates against named bindings; every declared variable must be bound.
double eval(const Expression& e, const std::map<std::string, double, std::less<>>& bindings);

std::string unparse(const Expression& e);

/// Moves `e` onto a new variable list: variable i of `e` becomes variable
/// `index_map[i]` of `varnames`.
Expression rebind(const Expression& e, std::vector<std::string> varnames, std::span<const std::size_t> index_map);

namespace node {

// Node constructors with light simplification: constant folding, x+0, x*1,
// 0*x, x^1, x^0, double negation.
NodePtr constant(double value);
NodePtr variable(std::size_t index);
NodePtr neg(NodePtr a);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr pow(NodePtr a, NodePtr b);
NodePtr call(Fn fn, NodePtr a, NodePtr b = nullptr);

bool is_const(const NodePtr& n, double value) noexcept;
bool equal(const NodePtr& a, const NodePtr& b) noexcept;

}  // namespace node

}  // namespace lpsym
