#include "mcbr24/math24.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mcbr24/errors.hpp"

namespace mcbr {

std::string Category::name() const {
  return "{" + std::to_string(small) + "," + std::to_string(large) + "}";
}

std::size_t category_index(CategoryId id) { return static_cast<std::size_t>(id); }

const Category& category(CategoryId id) { return kCategories[category_index(id)]; }

std::optional<Category> parse_category(std::string_view text) {
  if (text.size() >= 2 && text.front() == '{' && text.back() == '}') text = text.substr(1, text.size() - 2);
  for (const Category& c : kCategories) {
    if (text == std::to_string(c.small) + "," + std::to_string(c.large)) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kCorrect: return "Correct";
    case Verdict::kIncorrect: return "Incorrect";
    case Verdict::kMalformed: return "Malformed";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  for (Verdict v : {Verdict::kCorrect, Verdict::kIncorrect, Verdict::kMalformed}) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

std::vector<PairOutcome> pair_outcomes(int a, int b) {
  std::vector<PairOutcome> out;
  out.reserve(6);
  const Rational ra(a), rb(b);
  for (Op op : kAllOps) {
    for (bool swapped : {false, true}) {
      if (swapped && (op == Op::kAdd || op == Op::kMul)) continue;
      const auto v = swapped ? apply(op, rb, ra) : apply(op, ra, rb);
      if (v) out.push_back({*v, op, swapped});
    }
  }
  return out;
}

bool pair_achieves(int a, int b, int target) {
  const auto outcomes = pair_outcomes(a, b);
  return std::any_of(outcomes.begin(), outcomes.end(),
                     [&](const PairOutcome& o) { return o.value == Rational(target); });
}

std::optional<std::string> pair_expression(int a, int b, int target) {
  const int hi = std::max(a, b);
  const int lo = std::min(a, b);
  for (const PairOutcome& o : pair_outcomes(hi, lo)) {
    if (o.value != Rational(target)) continue;
    const int l = o.swapped ? lo : hi;
    const int r = o.swapped ? hi : lo;
    return "(" + std::to_string(l) + " " + static_cast<char>(o.op) + " " + std::to_string(r) + ")";
  }
  return std::nullopt;
}

namespace {

struct Item {
  Rational value;
  Expr expr;
};

// Combines any two items with every operator until one remains. Invokes
// `on_target` for each complete expression equal to 24; stops early when it
// returns false.
template <typename F>
bool search(std::vector<Item>& items, F& on_target) {
  if (items.size() == 1) {
    if (items[0].value == Rational(kTarget)) return on_target(items[0].expr);
    return true;
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      std::vector<Item> rest;
      rest.reserve(items.size() - 1);
      for (std::size_t m = 0; m < items.size(); ++m) {
        if (m != i && m != j) rest.push_back(items[m]);
      }
      for (Op op : kAllOps) {
        for (bool swapped : {false, true}) {
          if (swapped && (op == Op::kAdd || op == Op::kMul)) continue;
          const Item& l = swapped ? items[j] : items[i];
          const Item& r = swapped ? items[i] : items[j];
          const auto v = apply(op, l.value, r.value);
          if (!v) continue;
          rest.push_back({*v, Expr::binary(op, l.expr, r.expr)});
          const bool keep_going = search(rest, on_target);
          rest.pop_back();
          if (!keep_going) return false;
        }
      }
    }
  }
  return true;
}

std::vector<Item> leaves_of(const Puzzle& puzzle) {
  std::vector<Item> items;
  for (int n : puzzle.numbers()) items.push_back({Rational(n), Expr::number(n)});
  return items;
}

}  // namespace

std::vector<Expr> solve_general(const Puzzle& puzzle) {
  std::set<std::string> canonical;
  auto collect = [&](const Expr& e) {
    canonical.insert(e.canonical());
    return true;
  };
  auto items = leaves_of(puzzle);
  search(items, collect);
  std::vector<Expr> out;
  out.reserve(canonical.size());
  for (const auto& text : canonical) out.push_back(Expr::parse(text));
  return out;
}

bool is_solvable(const Puzzle& puzzle) {
  bool found = false;
  auto stop = [&](const Expr&) {
    found = true;
    return false;
  };
  auto items = leaves_of(puzzle);
  search(items, stop);
  return found;
}

std::vector<Solution> solve_restricted(const Puzzle& puzzle) {
  std::vector<Solution> out;
  for (const Category& cat : kCategories) {
    for (int i = 1; i <= 4; ++i) {
      for (int j = i + 1; j <= 4; ++j) {
        std::array<int, 2> rest{};
        for (int p = 1, n = 0; p <= 4; ++p) {
          if (p != i && p != j) rest[static_cast<std::size_t>(n++)] = p;
        }
        const auto large = pair_expression(puzzle.at(i), puzzle.at(j), cat.large);
        if (!large) continue;
        const auto small = pair_expression(puzzle.at(rest[0]), puzzle.at(rest[1]), cat.small);
        if (!small) continue;
        out.push_back({cat, {i, j}, *large + " * " + *small});
      }
    }
  }
  return out;
}

Verdict validate_answer(const Puzzle& puzzle, std::string_view answer_text) {
  std::optional<Expr> expr;
  try {
    expr = Expr::parse(answer_text);
  } catch (const ExprParseError&) {
    return Verdict::kMalformed;
  }
  auto used = expr->leaves();
  std::sort(used.begin(), used.end());
  const auto& nums = puzzle.numbers();
  if (!std::equal(used.begin(), used.end(), nums.begin(), nums.end())) return Verdict::kIncorrect;
  const auto value = expr->evaluate();
  return value && *value == Rational(kTarget) ? Verdict::kCorrect : Verdict::kIncorrect;
}

}  // namespace mcbr
