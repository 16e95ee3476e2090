#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcbr24/expr.hpp"
#include "mcbr24/puzzle.hpp"
#include "mcbr24/rational.hpp"

namespace mcbr {

inline constexpr int kTarget = 24;

enum class CategoryId { k1x24, k2x12, k3x8, k4x6 };

// A factor pair {small, large} with small * large = 24.
struct Category {
  CategoryId id;
  int large;
  int small;

  std::string name() const;  // "{4,6}"
  friend bool operator==(const Category&, const Category&) = default;
};

// Fixed batch order used everywhere: {1,24}, {2,12}, {3,8}, {4,6}.
inline constexpr std::array<Category, 4> kCategories{{
    {CategoryId::k1x24, 24, 1},
    {CategoryId::k2x12, 12, 2},
    {CategoryId::k3x8, 8, 3},
    {CategoryId::k4x6, 6, 4},
}};

const Category& category(CategoryId id);
std::size_t category_index(CategoryId id);
// Parses "{4,6}" or "4,6"; nullopt if unknown.
std::optional<Category> parse_category(std::string_view text);

// One member of the (x1 op x2) * (x3 op x4) family.
struct Solution {
  Category category;
  std::array<int, 2> large_positions;  // 1-based, ascending
  std::string expression;

  friend bool operator==(const Solution&, const Solution&) = default;
};

enum class Verdict { kCorrect, kIncorrect, kMalformed };

std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view text);

// A value one operator produces from a pair, with the operand order used.
struct PairOutcome {
  Rational value;
  Op op;
  bool swapped;  // true: rhs op lhs
};

// All six ordered results (a+b, a-b, b-a, a*b, a/b, b/a), skipping division by zero.
std::vector<PairOutcome> pair_outcomes(int a, int b);
bool pair_achieves(int a, int b, int target);
// Text "(hi op lo)" for the first operator producing `target`; nullopt if none.
std::optional<std::string> pair_expression(int a, int b, int target);

// Every distinct (by canonical text) expression over the four numbers that
// equals 24. Sorted by canonical text; each element prints canonically.
std::vector<Expr> solve_general(const Puzzle& puzzle);
bool is_solvable(const Puzzle& puzzle);

// Restricted-family records, one per (category, large_positions), in
// category batch order then position order.
std::vector<Solution> solve_restricted(const Puzzle& puzzle);

// Eval: Correct iff the text parses, uses exactly the puzzle's numbers and
// equals 24.
Verdict validate_answer(const Puzzle& puzzle, std::string_view answer_text);

}  // namespace mcbr
