#pragma once

// A small expression language for scalar functions of chart coordinates:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | ident | func '(' expr ')' | '(' expr ')'
//
// Functions: exp, log, sin, cos, sqrt. '^' is right-associative, every other
// binary operator is left-associative.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skewspin/jet.hpp"

namespace skewspin {

enum class Op { Number, Symbol, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Sin, Cos, Sqrt };

struct ExprNode {
  Op op = Op::Number;
  double number = 0.0;
  std::string name;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)), message_(msg), offset_(offset) {}
  std::size_t offset() const { return offset_; }
  /// The diagnostic without the position suffix.
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& msg, std::string subexpr)
      : std::runtime_error(msg + " in '" + subexpr + "'"), subexpr_(std::move(subexpr)) {}
  const std::string& subexpression() const { return subexpr_; }

 private:
  std::string subexpr_;
};

/// Coordinate names recognised by default when no declaration is supplied.
const std::vector<std::string>& default_coordinates();

class Expr {
 public:
  Expr() : Expr(number(0.0)) {}
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  static Expr number(double v);
  static Expr symbol(std::string name);
  static Expr unary(Op op, const Expr& a);
  static Expr binary(Op op, const Expr& a, const Expr& b);

  const ExprNode& node() const { return *root_; }
  const std::shared_ptr<const ExprNode>& root() const { return root_; }

  std::set<std::string> free_symbols() const;
  /// Free symbols that are in `coordinates`.
  std::set<std::string> coordinates(const std::vector<std::string>& coordinates = default_coordinates()) const;
  /// Free symbols that are not in `coordinates`.
  std::set<std::string> parameters(const std::vector<std::string>& coordinates = default_coordinates()) const;

  std::string str() const;
  bool operator==(const Expr& o) const;

 private:
  std::shared_ptr<const ExprNode> root_;
};

/// Parses `src`. If `declared` is given, identifiers outside it are rejected.
Expr parse(std::string_view src, const std::set<std::string>* declared = nullptr);

std::string to_string(const Expr& e);
std::string format_number(double v);

/// Symbolic partial derivative with light constant folding.
Expr differentiate(const Expr& e, const std::string& var);
/// Replaces symbols by expressions.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& values);

/// An expression with every free symbol bound either to a coordinate slot or
/// to a numeric parameter, flattened to postfix form for evaluation.
class BoundExpr {
 public:
  BoundExpr() = default;
  BoundExpr(const Expr& e, const std::vector<std::string>& coordinates, const std::map<std::string, double>& params);

  double eval(const double* point) const;
  Jet eval_jet(const double* point, int order) const;
  bool depends_on_coordinates() const { return uses_coords_; }
  const Expr& expr() const { return expr_; }

 private:
  struct Instr {
    Op op;
    double number;
    int slot;  // coordinate index for symbols
    const ExprNode* node;
  };
  template <class T, class Leaf>
  T run(Leaf&& leaf) const;

  Expr expr_;
  std::vector<Instr> code_;
  bool uses_coords_ = false;
};

/// Value, gradient and Hessian of `e` at `point`.
DiffScalar eval_diff(const Expr& e, const std::vector<std::string>& coordinates, const std::vector<double>& point,
                     const std::map<std::string, double>& params);

}  // namespace skewspin
