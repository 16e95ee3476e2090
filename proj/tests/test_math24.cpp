#include <doctest.h>

#include <algorithm>
#include <set>

#include "mcbr24/errors.hpp"
#include "mcbr24/math24.hpp"

using namespace mcbr;

namespace {

std::optional<Rational> op(char c, std::optional<Rational> a, std::optional<Rational> b) {
  if (!a || !b) return std::nullopt;
  switch (c) {
    case '+': return *a + *b;
    case '-': return *a - *b;
    case '*': return *a * *b;
    default: return divide(*a, *b);
  }
}

// Permutations x operator triples x the five binary tree shapes.
bool oracle_solvable(std::array<int, 4> n) {
  const char ops[] = {'+', '-', '*', '/'};
  std::sort(n.begin(), n.end());
  do {
    const Rational a(n[0]), b(n[1]), c(n[2]), d(n[3]);
    for (char x : ops) {
      for (char y : ops) {
        for (char z : ops) {
          const std::optional<Rational> shapes[] = {
              op(z, op(y, op(x, a, b), c), d),  // ((a b) c) d
              op(z, op(x, a, op(y, b, c)), d),  // (a (b c)) d
              op(y, op(x, a, b), op(z, c, d)),  // (a b) (c d)
              op(x, a, op(z, op(y, b, c), d)),  // a ((b c) d)
              op(x, a, op(y, b, op(z, c, d))),  // a (b (c d))
          };
          for (const auto& v : shapes) {
            if (v && *v == Rational(24)) return true;
          }
        }
      }
    }
  } while (std::next_permutation(n.begin(), n.end()));
  return false;
}

bool makes(int a, int b, int target) {
  const Rational t(target);
  return Rational(a) + Rational(b) == t || Rational(a) - Rational(b) == t || Rational(b) - Rational(a) == t ||
         Rational(a) * Rational(b) == t || divide(Rational(a), Rational(b)) == t ||
         divide(Rational(b), Rational(a)) == t;
}

// (category, large positions) pairs by direct enumeration.
std::set<std::pair<int, std::array<int, 2>>> oracle_restricted(const Puzzle& p) {
  const int large[] = {24, 12, 8, 6};
  std::set<std::pair<int, std::array<int, 2>>> out;
  for (int c = 0; c < 4; ++c) {
    for (int i = 1; i <= 4; ++i) {
      for (int j = i + 1; j <= 4; ++j) {
        std::vector<int> rest;
        for (int q = 1; q <= 4; ++q) {
          if (q != i && q != j) rest.push_back(p.at(q));
        }
        if (makes(p.at(i), p.at(j), large[c]) && makes(rest[0], rest[1], 24 / large[c])) out.insert({c, {i, j}});
      }
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("math24") {
  TEST_CASE("(4,5,9,10) has the (10-4)*(9-5) decomposition") {
    const auto sols = solve_restricted(Puzzle({4, 5, 9, 10}));
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].category.name() == "{4,6}");
    CHECK(sols[0].large_positions == std::array<int, 2>{1, 4});
    CHECK(sols[0].expression == "(10 - 4) * (9 - 5)");
  }

  TEST_CASE("(1,3,7,12) decomposes as (7-1)*(12/3)") {
    const auto sols = solve_restricted(Puzzle({1, 3, 7, 12}));
    const bool found = std::any_of(sols.begin(), sols.end(), [](const Solution& s) {
      return s.category.id == CategoryId::k4x6 && s.large_positions == std::array<int, 2>{1, 3};
    });
    CHECK(found);
  }

  TEST_CASE("(1,3,6,7) has {4,6} at (1,3) and {3,8} at (1,4)") {
    const auto sols = solve_restricted(Puzzle({1, 3, 6, 7}));
    REQUIRE(sols.size() == 2);
    CHECK(sols[0].category.id == CategoryId::k3x8);
    CHECK(sols[0].large_positions == std::array<int, 2>{1, 4});
    CHECK(sols[1].category.id == CategoryId::k4x6);
    CHECK(sols[1].large_positions == std::array<int, 2>{1, 3});
  }

  TEST_CASE("unsolvable puzzles") {
    CHECK(solve_general(Puzzle({1, 1, 1, 1})).empty());
    CHECK_FALSE(is_solvable(Puzzle({1, 1, 1, 1})));
    CHECK(solve_restricted(Puzzle({1, 1, 1, 1})).empty());
  }

  TEST_CASE("3 3 8 8 needs fractions") {
    const auto sols = solve_general(Puzzle({3, 3, 8, 8}));
    REQUIRE_FALSE(sols.empty());
    for (const Expr& e : sols) CHECK(*e.evaluate() == Rational(24));
    CHECK(solve_restricted(Puzzle({3, 3, 8, 8})).empty());
  }

  TEST_CASE("general solutions are distinct, valid and sorted") {
    for (const auto& p : {Puzzle({4, 5, 9, 10}), Puzzle({1, 2, 3, 4}), Puzzle({6, 6, 6, 6}), Puzzle({2, 2, 2, 3})}) {
      const auto sols = solve_general(p);
      std::vector<std::string> texts;
      for (const Expr& e : sols) {
        texts.push_back(e.canonical());
        CHECK(e.to_string() == e.canonical());
        CHECK(validate_answer(p, e.to_string()) == Verdict::kCorrect);
      }
      CHECK(std::is_sorted(texts.begin(), texts.end()));
      CHECK(std::adjacent_find(texts.begin(), texts.end()) == texts.end());
    }
  }

  TEST_CASE("solvability matches an independent enumeration on every puzzle") {
    int mismatches = 0;
    for (const Puzzle& p : enumerate_puzzles()) {
      if (is_solvable(p) != oracle_solvable(p.numbers())) ++mismatches;
      if (is_solvable(p) != !solve_general(p).empty()) ++mismatches;
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("restricted decompositions match an independent enumeration on every puzzle") {
    for (const Puzzle& p : enumerate_puzzles()) {
      std::set<std::pair<int, std::array<int, 2>>> got;
      for (const Solution& s : solve_restricted(p)) {
        got.insert({static_cast<int>(category_index(s.category.id)), s.large_positions});
      }
      const auto want = oracle_restricted(p);
      if (got != want) {
        CAPTURE(p.text());
        CHECK(got == want);
      }
    }
  }

  TEST_CASE("restricted expressions are valid and appear among the general solutions") {
    for (const Puzzle& p : enumerate_puzzles()) {
      const auto sols = solve_restricted(p);
      if (sols.empty()) continue;
      std::set<std::string> general;
      for (const Expr& e : solve_general(p)) general.insert(e.canonical());
      for (const Solution& s : sols) {
        CAPTURE(s.expression);
        CHECK(validate_answer(p, s.expression) == Verdict::kCorrect);
        CHECK(general.count(Expr::parse(s.expression).canonical()) == 1);
        CHECK(s.large_positions[0] < s.large_positions[1]);
      }
    }
  }

  TEST_CASE("restricted records are in batch order, then position order") {
    for (const Puzzle& p : enumerate_puzzles()) {
      const auto sols = solve_restricted(p);
      for (std::size_t i = 1; i < sols.size(); ++i) {
        const auto a = std::make_pair(category_index(sols[i - 1].category.id), sols[i - 1].large_positions);
        const auto b = std::make_pair(category_index(sols[i].category.id), sols[i].large_positions);
        CHECK(a < b);
      }
    }
  }

  TEST_CASE("validate_answer verdicts") {
    const Puzzle p({4, 5, 9, 10});
    CHECK(validate_answer(p, "(10 - 4) * (9 - 5)") == Verdict::kCorrect);
    CHECK(validate_answer(p, "(10 \xE2\x88\x92 4) \xC3\x97 (9 \xE2\x88\x92 5)") == Verdict::kCorrect);
    CHECK(validate_answer(p, "(10 - 4) * (9 - 4)") == Verdict::kIncorrect);  // wrong numbers
    CHECK(validate_answer(p, "(10 - 4) * 4") == Verdict::kIncorrect);        // a number missing
    CHECK(validate_answer(p, "10 + 4 + 9 + 5") == Verdict::kIncorrect);      // 28
    CHECK(validate_answer(p, "(10 - 4) * (9 - 5) = 24") == Verdict::kMalformed);
    CHECK(validate_answer(p, "**bold**") == Verdict::kMalformed);
    CHECK(validate_answer(Puzzle({3, 3, 8, 8}), "8 / (3 - 8 / 3)") == Verdict::kCorrect);
    CHECK(validate_answer(Puzzle({2, 2, 3, 3}), "2 / (2 - 2) + 3 * 3") == Verdict::kIncorrect);
  }

  TEST_CASE("pair helpers") {
    CHECK(pair_achieves(9, 5, 4));
    CHECK(pair_achieves(3, 12, 4));
    CHECK_FALSE(pair_achieves(3, 5, 4));
    CHECK(pair_expression(4, 10, 6) == std::optional<std::string>("(10 - 4)"));
    CHECK(pair_expression(12, 3, 4) == std::optional<std::string>("(12 / 3)"));
    CHECK(pair_expression(2, 2, 4) == std::optional<std::string>("(2 + 2)"));
    CHECK_FALSE(pair_expression(3, 5, 4));
    CHECK(pair_outcomes(3, 0).size() == 5);  // 3 / 0 skipped
  }

  TEST_CASE("categories") {
    for (const Category& c : kCategories) CHECK(c.large * c.small == 24);
    CHECK(parse_category("{4,6}")->id == CategoryId::k4x6);
    CHECK(parse_category("2,12")->id == CategoryId::k2x12);
    CHECK_FALSE(parse_category("{5,5}"));
    CHECK(parse_verdict("Correct") == Verdict::kCorrect);
    CHECK(parse_verdict(to_string(Verdict::kMalformed)) == Verdict::kMalformed);
  }
}
