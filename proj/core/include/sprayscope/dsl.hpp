#pragma once

// Closed-form expression language used to define spray coefficients,
// Finsler functions and sampling-domain constraints.
//
// Variables are x1..xn (base coordinates) and y1..yn (fibre coordinates).
// A point of the tangent bundle is passed around as 2n doubles laid out as
// (x1..xn, y1..yn).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sprayscope::dsl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Raised when an expression is evaluated outside its domain (division by
/// zero, sqrt of a negative number, log of a non-positive number, ...).
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : std::runtime_error(what + " in `" + subexpression + "`"),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class DefinitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool is_integer() const { return den == 1; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Reduces to lowest terms with a positive denominator.
Rational make_rational(std::int64_t num, std::int64_t den);

enum class VarKind { position, velocity };
enum class Function { sqrt, abs, sin, cos, exp, log };
enum class BinaryOp { add, sub, mul, div };

std::string_view function_name(Function f);

class Expression;

struct Variable {
  VarKind kind;
  int index;  // 1-based
};
struct Constant {
  double value;
};
struct Negate;
struct Binary;
struct Power;
struct Call;

/// Immutable expression tree with value semantics; copies share nodes.
class Expression {
 public:
  struct Node;

  Expression();  // the constant 0

  static Expression variable(VarKind kind, int index);
  static Expression x(int index) { return variable(VarKind::position, index); }
  static Expression y(int index) { return variable(VarKind::velocity, index); }
  static Expression constant(double value);
  static Expression call(Function f, Expression arg);
  static Expression power(Expression base, Rational exponent);

  const Node& node() const { return *node_; }

  /// Largest variable index referenced (0 for a closed expression).
  int max_index() const;

  friend Expression operator+(Expression a, Expression b);
  friend Expression operator-(Expression a, Expression b);
  friend Expression operator*(Expression a, Expression b);
  friend Expression operator/(Expression a, Expression b);
  friend Expression operator-(Expression a);

  /// Structural equality of the trees.
  friend bool operator==(const Expression& a, const Expression& b);

 private:
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Negate {
  Expression operand;
};
struct Binary {
  BinaryOp op;
  Expression lhs;
  Expression rhs;
};
struct Power {
  Expression base;
  Rational exponent;
};
struct Call {
  Function fn;
  Expression arg;
};

struct Expression::Node {
  std::variant<Variable, Constant, Negate, Binary, Power, Call> value;
};

/// Parses infix text. Precedence from tight to loose: `^`, unary minus,
/// `*` `/`, `+` `-`. The exponent of `^` must be a literal rational such as
/// `2`, `-1`, `0.5` or `(1/3)`.
Expression parse_expression(std::string_view text, int dimension);

/// Fully parenthesised text that re-parses to the same tree.
std::string to_string(const Expression& expr);

/// Evaluates at a point laid out as (x1..xn, y1..yn).
double evaluate(const Expression& expr, std::span<const double> point);

struct SprayDefinition {
  std::string name;
  int dimension = 0;
  std::vector<Expression> coefficients;  // G^1 .. G^n
  std::vector<Expression> constraints;   // each must be > 0 on the domain
};

struct FinslerDefinition {
  std::string name;
  int dimension = 0;
  Expression function;  // F
  std::vector<Expression> constraints;
};

using Definition = std::variant<SprayDefinition, FinslerDefinition>;

/// Parses a `key = value` definition file; dispatches on `G1..Gn` vs `F`.
Definition parse_definition_file(std::string_view text);
SprayDefinition parse_spray_file(std::string_view text);
FinslerDefinition parse_finsler_file(std::string_view text);

std::string to_file(const SprayDefinition& def);
std::string to_file(const FinslerDefinition& def);

}  // namespace sprayscope::dsl
