#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acsol/error.hpp"

namespace acsol {

// Metric-component expression language.
//
//   expr     := term (('+' | '-') term)*
//   term     := unary (('*' | '/') unary)*
//   unary    := ('-' | '+') unary | power
//   power    := primary ('^' exponent)*          left-associative
//   exponent := INT | '(' ['-' | '+'] INT ')'
//   primary  := NUMBER | 'pi' | 'x' INT | FUNC '(' expr ')' | '(' expr ')'
//   FUNC     := 'sin' | 'cos' | 'exp'
//
// Precedence is ^ > unary minus > * / > + -, so -2^2 == -4 and 2^3^2 == 64.
// Variables x1..xn are bounded by the dimension given to the parser.

enum class NodeKind { Constant, Variable, Neg, Sin, Cos, Exp, Add, Sub, Mul, Div, Pow };

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;   // Constant
  int variable = 0;     // Variable: 0-based axis
  int exponent = 0;     // Pow
  std::size_t offset = 0;  // byte offset of the node's first token
  int depth = 1;
  std::unique_ptr<ExprNode> lhs;
  std::unique_ptr<ExprNode> rhs;
};

inline constexpr int kMaxExpressionDepth = 64;

class ExpressionAst {
 public:
  ExpressionAst(std::unique_ptr<ExprNode> root, int dim, std::string source);

  const ExprNode& root() const { return *root_; }
  int dim() const noexcept { return dim_; }
  const std::string& source() const noexcept { return source_; }

  // Constructor-style rendering, e.g. "Add(1,Mul(0.1,Sin(x1)))".
  std::string describe() const;

 private:
  std::shared_ptr<const ExprNode> root_;
  int dim_;
  std::string source_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, std::string message);
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class EvalError : public Error {
 public:
  EvalError(ErrorKind kind, std::size_t offset, std::string message);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

ExpressionAst parse_expression(std::string_view src, int dim = 3);

// Evaluates at a point of length ast.dim() (shorter is allowed when the
// expression does not reference the missing coordinates).
double eval_expression(const ExpressionAst& ast, std::span<const double> point);

}  // namespace acsol
