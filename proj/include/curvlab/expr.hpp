#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "curvlab/jet.hpp"

namespace curvlab {

enum class ExprKind {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Neg,
  Call,
};

enum class FuncId { Sin, Cos, Tan, Exp, Log, Sqrt };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  double value = 0.0;   // Constant
  int var = -1;         // Variable (coordinate index)
  FuncId fn = FuncId::Sin;
  ExprPtr a, b;         // children (arity per kind)
};

/// Parsed scalar expression over named chart coordinates.
/// Immutable; safe to share and evaluate concurrently.
class Expression {
 public:
  Expression() = default;
  Expression(ExprPtr root, std::vector<std::string> coords);

  /// Grammar: + - * / ^ with standard precedence, ^ right-associative and
  /// binding tighter than unary minus; functions sin cos tan exp log sqrt;
  /// decimal literals with optional exponent. Throws SyntaxError /
  /// UnknownIdentifier.
  static Expression parse(const std::string& text,
                          const std::vector<std::string>& coord_names);

  /// Canonical fully parenthesized text; parse(to_string()) reproduces the
  /// AST node for node.
  std::string to_string() const;

  Jet eval_jet(std::span<const double> point, int order) const;
  double eval_value(std::span<const double> point) const;

  bool structurally_equal(const Expression& o) const;

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const ExprPtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }

  // node builders for programmatic construction (same coordinate set)
  static Expression constant(double v, std::vector<std::string> coords);
  static Expression variable(int var, std::vector<std::string> coords);
  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  Expression scaled(double s) const;
  Expression exp_of() const;  // exp(this)

 private:
  ExprPtr root_;
  std::vector<std::string> coords_;
};

}  // namespace curvlab
