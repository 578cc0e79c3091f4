#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "exitrate/types.hpp"

namespace exitrate {

/// Closed-form scalar expression over the coordinates `x1`, `x2` (alias `x`
/// for `x1`, `y` for `x2`), named parameters, and the constants `pi`, `e`.
///
/// Grammar (recursive descent, `^` is right-associative and binds tighter
/// than unary minus, so `-x^2 == -(x^2)`):
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('-' | '+') unary | power
///   power  := atom ('^' unary)?
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
///
/// Functions: sin cos tan exp log sqrt abs.
class Expression {
 public:
  /// Parameters are bound at parse time; unknown identifiers are errors.
  static Expression parse(std::string_view text,
                          const std::map<std::string, double>& parameters = {});

  static Expression constant(double value);

  double evaluate(const Point& x) const;
  const std::string& source() const noexcept { return source_; }

 private:
  enum class Op { kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kCall };
  enum class Fn { kSin, kCos, kTan, kExp, kLog, kSqrt, kAbs };

  struct Node {
    Op op = Op::kConst;
    double value = 0.0;
    int lhs = -1;
    int rhs = -1;
    int var = 0;
    Fn fn = Fn::kSin;
  };

  class Parser;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::string source_;

  double eval(int node, const Point& x) const;
};

}  // namespace exitrate
