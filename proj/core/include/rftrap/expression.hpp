#pragma once

// Recursive-descent parser for generator expressions.
//
//   expr    := term (("+"|"-") term)*
//   term    := factor (("*"|"/") factor)*
//   factor  := ("+"|"-") factor | base ("^" uint)?
//   base    := number | name | "x" | "y" | "pi" | "(" expr ")"
//            | ("cos"|"sin") "(" expr ")"
//
// Division is accepted only by expressions that reduce to a nonzero constant.
// The parser only builds the tree; interpretation (polynomial, Fourier or
// plain numeric) is done by the consumers in generator.hpp.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace rftrap {

using ParamMap = std::map<std::string, double>;

struct Expr {
  enum class Kind { number, param, var_x, var_y, pi, add, sub, mul, div, pow, neg, cos, sin };

  Kind kind;
  std::size_t position = 0;  // byte offset of the token that introduced the node
  double number = 0.0;       // Kind::number
  std::string name;          // Kind::param
  unsigned exponent = 0;     // Kind::pow
  std::shared_ptr<const Expr> lhs;  // unary operand, or left operand
  std::shared_ptr<const Expr> rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Throws ParseError on malformed input or on a negative / non-integer exponent.
ExprPtr parse_expression(std::string_view text);

/// Plain double evaluation of the tree at (x, y). Unbound parameters throw SpecError.
double evaluate(const Expr& e, const ParamMap& params, double x, double y);

/// Convenience: parse + evaluate.
double evaluate_expression(std::string_view text, const ParamMap& params, double x, double y);

}  // namespace rftrap
