#pragma once

// Scalar-field expressions over the chart coordinates x1..x4.
//
// Grammar: real literals, variables x1..x4, the constant pi, binary + - * /,
// ^ with a variable-free (constant) exponent, unary -, and the functions
// sqrt, exp, sin, cos. Precedence: ^ (right-assoc) > unary - > * / > + -.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/errors.hpp"
#include "finsler/jet.hpp"

namespace finsler {

struct SourceLocation {
  int line = 1;
  int column = 1;
};

/// Syntax error, unknown identifier or arity error, with the position of the
/// offending token.
class ParseError : public InputError {
 public:
  ParseError(SourceLocation where, const std::string& what)
      : InputError("line " + std::to_string(where.line) + ", column " + std::to_string(where.column) + ": " + what),
        where_(where) {}
  SourceLocation where() const { return where_; }

 private:
  SourceLocation where_;
};

class Expr {
 public:
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
  enum class Func { Sqrt, Exp, Sin, Cos };

  struct Node {
    Kind kind = Kind::Number;
    double value = 0;  // literal value, or the folded exponent of a Pow
    int variable = 0;  // zero-based
    Func func = Func::Sqrt;
    std::shared_ptr<const Node> lhs, rhs;
    SourceLocation where;
  };

  Expr() = default;
  static Expr parse(std::string_view text);
  static Expr constant(double v);

  /// Minimal-parenthesis rendering that parses back to the same tree.
  std::string print() const;
  /// One past the largest variable index used (0 for constant expressions).
  int arity() const;
  bool structurally_equal(const Expr& other) const;
  const Node& root() const { return *root_; }

  double eval(std::span<const double> x) const;

  /// Jet-valued evaluation. `vars[i]` is the jet of coordinate x_{i+1}; all
  /// jets must share a layout. Domain errors carry the expression location.
  template <typename Scalar>
  Jet<Scalar> eval_jet(std::span<const Jet<Scalar>> vars) const;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

namespace detail {

[[noreturn]] void rethrow_domain_at(const DomainError& e, SourceLocation where);

template <typename Scalar>
Jet<Scalar> eval_node(const Expr::Node& n, std::span<const Jet<Scalar>> vars) {
  using K = Expr::Kind;
  try {
    switch (n.kind) {
      case K::Number: return Jet<Scalar>(vars[0].layout(), Scalar(n.value));
      case K::Variable:
        if (static_cast<std::size_t>(n.variable) >= vars.size()) throw InputError("expression variable beyond chart dimension");
        return vars[static_cast<std::size_t>(n.variable)];
      case K::Neg: return -eval_node(*n.lhs, vars);
      case K::Add: return eval_node(*n.lhs, vars) + eval_node(*n.rhs, vars);
      case K::Sub: return eval_node(*n.lhs, vars) - eval_node(*n.rhs, vars);
      case K::Mul: return eval_node(*n.lhs, vars) * eval_node(*n.rhs, vars);
      case K::Div: return eval_node(*n.lhs, vars) / eval_node(*n.rhs, vars);
      case K::Pow: {
        const auto base = eval_node(*n.lhs, vars);
        const double e = n.value;
        if (e == std::floor(e) && e < 0 && e >= -16) return Scalar(1) / pow(base, Scalar(-e));
        return pow(base, Scalar(e));
      }
      case K::Call: {
        const auto arg = eval_node(*n.lhs, vars);
        switch (n.func) {
          case Expr::Func::Sqrt: return sqrt(arg);
          case Expr::Func::Exp: return exp(arg);
          case Expr::Func::Sin: return sin(arg);
          case Expr::Func::Cos: return cos(arg);
        }
      }
    }
  } catch (const DomainError& e) {
    rethrow_domain_at(e, n.where);
  }
  throw InputError("malformed expression tree");
}

}  // namespace detail

template <typename Scalar>
Jet<Scalar> Expr::eval_jet(std::span<const Jet<Scalar>> vars) const {
  if (!root_) throw InputError("empty expression");
  if (vars.empty()) throw InputError("eval_jet needs at least one variable jet");
  return detail::eval_node(*root_, vars);
}

}  // namespace finsler
