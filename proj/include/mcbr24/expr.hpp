#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcbr24/rational.hpp"

namespace mcbr {

enum class Op : char { kAdd = '+', kSub = '-', kMul = '*', kDiv = '/' };

inline constexpr Op kAllOps[] = {Op::kAdd, Op::kSub, Op::kMul, Op::kDiv};

// Applies `op` exactly; nullopt for division by zero.
std::optional<Rational> apply(Op op, Rational lhs, Rational rhs);

// Immutable binary arithmetic expression with integer leaves. Copies share
// structure, so passing by value is cheap.
class Expr {
 public:
  static Expr number(std::int64_t value);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  // Accepts integers, parentheses and + - * / (also the typographic
  // variants × ÷ −). Unary operators are rejected. Throws ExprParseError.
  static Expr parse(std::string_view text);

  bool is_number() const;
  std::int64_t value() const;  // leaf value; precondition is_number()
  Op op() const;               // precondition !is_number()
  Expr lhs() const;
  Expr rhs() const;

  // nullopt when any subexpression divides by zero.
  std::optional<Rational> evaluate() const;
  std::vector<std::int64_t> leaves() const;

  // Infix text with the minimum parentheses needed to keep the tree's value.
  std::string to_string() const;

  // Canonical text: + and - chains are flattened into one signed sum, * and /
  // chains into one product with a denominator part, and operands are
  // sorted. Two expressions that differ only by commutative or associative
  // rewrites have the same canonical text. The text parses back to an
  // equivalent expression.
  std::string canonical() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace mcbr
