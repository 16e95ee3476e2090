#include <doctest.h>

#include <algorithm>

#include "mcbr24/features.hpp"
#include "mcbr24/math24.hpp"

using namespace mcbr;

namespace {

std::size_t target_index(int t) {
  return static_cast<std::size_t>(std::find(kPairTargets.begin(), kPairTargets.end(), t) - kPairTargets.begin());
}

// Six ordered results of a pair in exact arithmetic.
bool reaches(int a, int b, int t) {
  if (a + b == t || a - b == t || b - a == t || a * b == t) return true;
  return (b != 0 && a == t * b) || (a != 0 && b == t * a);
}

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("(4,5,9,10): two pairs make 1, one of them with the first number") {
    const FeatureVector f = extract_features(Puzzle({4, 5, 9, 10}));
    CHECK(f.global_counts[target_index(1)] == 2);
    CHECK(f.per_position_counts[0][target_index(1)] == 1);
  }

  TEST_CASE("(1,1,1,1): every pair makes 1") {
    const FeatureVector f = extract_features(Puzzle({1, 1, 1, 1}));
    CHECK(f.global_counts[target_index(1)] == 6);
    CHECK(f.global_counts[target_index(2)] == 6);
    CHECK(f.global_counts[target_index(24)] == 0);
  }

  TEST_CASE("counts match a direct enumeration and stay in range") {
    for (const Puzzle& p : enumerate_puzzles()) {
      const FeatureVector f = extract_features(p);
      for (std::size_t t = 0; t < kPairTargets.size(); ++t) {
        int global = 0;
        int position_sum = 0;
        for (int i = 1; i <= 4; ++i) {
          int partners = 0;
          for (int j = 1; j <= 4; ++j) {
            if (j != i && reaches(p.at(i), p.at(j), kPairTargets[t])) ++partners;
            if (j > i && reaches(p.at(i), p.at(j), kPairTargets[t])) ++global;
          }
          CHECK(f.per_position_counts[static_cast<std::size_t>(i - 1)][t] == partners);
          position_sum += f.per_position_counts[static_cast<std::size_t>(i - 1)][t];
        }
        CHECK(f.global_counts[t] == global);
        CHECK(position_sum == 2 * f.global_counts[t]);
        CHECK(f.global_counts[t] <= 6);
      }
    }
  }

  TEST_CASE("values layout") {
    const FeatureVector f = extract_features(Puzzle({4, 5, 9, 10}));
    const auto v = f.values();
    REQUIRE(v.size() == 40);
    CHECK(v[0] == 2.0);
    CHECK(v[8] == f.per_position_counts[0][0]);
    CHECK(v[39] == f.per_position_counts[3][7]);
  }

  TEST_CASE("labels of (4,5,9,10)") {
    const LabelVector l = encode_labels(solve_restricted(Puzzle({4, 5, 9, 10})));
    const std::array<std::uint8_t, 5> zero{}, want{1, 1, 0, 0, 1};
    CHECK(std::equal(l.batch(CategoryId::k1x24).begin(), l.batch(CategoryId::k1x24).end(), zero.begin()));
    CHECK(std::equal(l.batch(CategoryId::k2x12).begin(), l.batch(CategoryId::k2x12).end(), zero.begin()));
    CHECK(std::equal(l.batch(CategoryId::k3x8).begin(), l.batch(CategoryId::k3x8).end(), zero.begin()));
    CHECK(std::equal(l.batch(CategoryId::k4x6).begin(), l.batch(CategoryId::k4x6).end(), want.begin()));
  }

  TEST_CASE("labels of (1,3,6,7)") {
    const LabelVector l = encode_labels(solve_restricted(Puzzle({1, 3, 6, 7})));
    const std::array<std::uint8_t, 20> want{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 1, 0, 1, 0};
    CHECK(l.bits == want);
  }

  TEST_CASE("empty solution set encodes to zeros") { CHECK(encode_labels({}).bits == std::array<std::uint8_t, 20>{}); }

  TEST_CASE("same-category solutions are OR-ed") {
    // 2 2 2 3: 6 from 2 * 3 at three positions, 4 from 2 + 2 (or 2 * 2).
    const LabelVector l = encode_labels(solve_restricted(Puzzle({2, 2, 2, 3})));
    const auto b = l.batch(CategoryId::k4x6);
    CHECK(std::vector<int>(b.begin(), b.end()) == std::vector<int>{1, 1, 1, 1, 1});
  }

  TEST_CASE("label invariants on every solvable puzzle") {
    for (const Puzzle& p : enumerate_puzzles()) {
      const LabelVector l = encode_labels(solve_restricted(p));
      for (const Category& c : kCategories) {
        const auto b = l.batch(c.id);
        const int positions = b[1] + b[2] + b[3] + b[4];
        if (b[0] == 0) {
          CHECK(positions == 0);
        } else {
          CHECK(positions >= 2);
        }
      }
    }
  }

  TEST_CASE("model input is scaled into [0,1]") {
    for (const Puzzle& p : enumerate_puzzles()) {
      const ModelInput x = model_input(p);
      for (double v : x) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
    const ModelInput x = model_input(Puzzle({4, 5, 9, 10}));
    CHECK(x[0] == doctest::Approx(4.0 / 13));
    CHECK(x[3] == doctest::Approx(10.0 / 13));
    CHECK(x[4] == doctest::Approx(2.0 / 6));
  }
}
