#pragma once

// Scalar expression language for chart components.
//
// Grammar (see docs/grammar.md):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right associative
//   primary := number | var | func '(' expr ')' | '(' expr ')'
//   var     := 'x1' | 'x2' | 'x3' | 'x4'
//   func    := sin | cos | exp | log | sqrt | atan
//
// `^` binds tighter than unary minus, so -x1^2 == -(x1^2). The exponent of
// `^` may itself carry a sign: x1^-2.

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace curv4 {

using Point = std::array<double, 4>;

enum class Op { constant, variable, neg, add, sub, mul, div, pow, func };
enum class Func { sin, cos, exp, log, sqrt, atan };

const char* func_name(Func f);

struct ExprNode;

/// Immutable expression DAG handle. Cheap to copy; safe to share across
/// threads for evaluation.
class Expr {
 public:
  Expr();  // constant 0
  Expr(double c);  // NOLINT(google-explicit-constructor)

  static Expr variable(int index);  // 0-based: x1 is variable(0)
  static Expr function(Func f, Expr arg);

  Op op() const;
  double constant_value() const;  // only meaningful for Op::constant
  int variable_index() const;     // only meaningful for Op::variable
  Func func() const;              // only meaningful for Op::func
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const { return op() == Op::constant; }
  bool is_zero() const { return is_constant() && constant_value() == 0.0; }
  bool is_one() const { return is_constant() && constant_value() == 1.0; }
  bool depends_on_variables() const;

  /// Throws DomainError on log/sqrt of negatives, division by zero, or a
  /// non-finite result.
  double eval(const Point& p) const;

  /// Number of nodes in the tree (shared subtrees counted per occurrence).
  std::size_t node_count() const;

  const ExprNode* node() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  friend Expr make_node(Op, Expr, Expr, Func);
  friend struct ExprNode;
  std::shared_ptr<const ExprNode> node_;
};

// Builders fold constants and drop additive zeros / multiplicative ones.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);
Expr atan(const Expr& a);

/// Parses `source`. Throws SyntaxError (1-based byte positions) or
/// UnknownIdentifier.
Expr parse(std::string_view source);

/// Fully parenthesized text that parse() maps back to an equivalent tree.
std::string print(const Expr& e);

/// Symbolic partial derivative with respect to x_{var+1} (var is 0-based).
Expr differentiate(const Expr& e, int var);

}  // namespace curv4
