#include <doctest.h>

#include <cmath>
#include <random>

#include "mcbr24/metrics.hpp"

using namespace mcbr;

namespace {

Case solved(const Puzzle& p) {
  Case c = Case::unsolved(p);
  c.solutions = solve_restricted(p);
  return c;
}

std::vector<bool> flags(std::initializer_list<int> bits) {
  std::vector<bool> out;
  for (int b : bits) out.push_back(b != 0);
  return out;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("relevance schemes") {
    const Case test = solved(Puzzle({4, 5, 9, 10}));
    const Case cand = solved(Puzzle({1, 3, 6, 7}));
    CHECK(is_relevant(test, cand, RelevanceScheme::kSCO));
    CHECK_FALSE(is_relevant(test, cand, RelevanceScheme::kSCD));
    CHECK(is_relevant(test, test, RelevanceScheme::kSCO));
    CHECK(is_relevant(test, test, RelevanceScheme::kSCD));
    CHECK_FALSE(is_relevant(test, solved(Puzzle({1, 1, 2, 12})), RelevanceScheme::kSCO));
  }

  TEST_CASE("worked example: flags (1,0,1), 10 relevant, k = 3") {
    const MetricsAtK m = retrieval_metrics_at_k(flags({1, 0, 1}), 10, 3);
    const double dcg = 1.0 + 1.0 / std::log2(4.0);
    const double idcg = 1.0 + 1.0 / std::log2(3.0);
    CHECK(std::abs(m.precision - 2.0 / 3.0) < 1e-9);
    CHECK(std::abs(m.recall - 0.2) < 1e-9);
    CHECK(std::abs(m.ndcg - dcg / idcg) < 1e-9);
    CHECK(std::abs(m.ndcg - 0.9197) < 1e-4);
    CHECK(std::abs(m.mrr - 1.0) < 1e-9);
    CHECK(std::abs(m.f1 - 2 * (2.0 / 3) * 0.2 / (2.0 / 3 + 0.2)) < 1e-9);
  }

  TEST_CASE("all relevant with relevant_total = k gives ones") {
    const MetricsAtK m = retrieval_metrics_at_k(flags({1, 1, 1, 1}), 4, 4);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
    CHECK(m.ndcg == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.mrr == 1.0);
  }

  TEST_CASE("nothing relevant gives zeros") {
    const MetricsAtK m = retrieval_metrics_at_k(flags({0, 0, 0}), 5, 3);
    CHECK(m.precision == 0.0);
    CHECK(m.recall == 0.0);
    CHECK(m.f1 == 0.0);
    CHECK(m.ndcg == 0.0);
    CHECK(m.mrr == 0.0);
  }

  TEST_CASE("edge cases") {
    CHECK(retrieval_metrics_at_k(flags({1}), 0, 1).recall == 0.0);
    const MetricsAtK short_list = retrieval_metrics_at_k(flags({0, 1}), 3, 5);
    CHECK(short_list.precision == doctest::Approx(0.2));
    CHECK(short_list.mrr == doctest::Approx(0.5));
    CHECK_THROWS_AS(retrieval_metrics_at_k(flags({1}), 1, 0), std::invalid_argument);
  }

  TEST_CASE("averaging over k") {
    const std::vector<int> ks{1, 2, 3};
    const auto f = flags({0, 1, 1});
    const RetrievalMetrics avg = average_over_k(f, 4, ks);
    double p = 0, r = 0;
    for (int k : ks) {
      p += retrieval_metrics_at_k(f, 4, static_cast<std::size_t>(k)).precision;
      r += retrieval_metrics_at_k(f, 4, static_cast<std::size_t>(k)).recall;
    }
    CHECK(avg.precision == doctest::Approx(p / 3));
    CHECK(avg.recall == doctest::Approx(r / 3));
    CHECK(avg.mrr == doctest::Approx((0.0 + 0.5 + 0.5) / 3));
  }

  TEST_CASE("random rankings: bounds, recall monotonicity, NDCG boundary") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t len = 1 + rng() % 10;
      std::vector<bool> f(len);
      std::size_t hits = 0;
      for (std::size_t i = 0; i < len; ++i) {
        f[i] = rng() % 2 == 0;
        hits += f[i];
      }
      const std::size_t total = hits + rng() % 5;
      double prev_recall = -1.0;
      for (std::size_t k = 1; k <= len + 2; ++k) {
        const MetricsAtK m = retrieval_metrics_at_k(f, total, k);
        for (double v : {m.precision, m.recall, m.f1, m.ndcg, m.mrr}) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0 + 1e-12);
        }
        CHECK(m.recall >= prev_recall);
        prev_recall = m.recall;

        const std::size_t m_top = std::min(k, total);
        bool top_all_relevant = m_top <= len;
        for (std::size_t i = 0; top_all_relevant && i < m_top; ++i) top_all_relevant = f[i];
        if (top_all_relevant && m_top > 0) CHECK(std::abs(m.ndcg - 1.0) < 1e-9);
      }
    }
  }

  TEST_CASE("generation tally partitions TC cases") {
    GenerationTally t;
    t.add(true, true);
    t.add(true, true);
    t.add(false, true);
    t.add(false, false);
    t.add(true, false);
    t.add_errored();
    const GenerationMetrics m = t.metrics();
    CHECK(m.scored == 5);
    CHECK(m.errored_count == 1);
    CHECK(m.accuracy == doctest::Approx(3.0 / 5));
    REQUIRE(m.faithfulness);
    REQUIRE(m.negative_rejection);
    CHECK(*m.faithfulness == doctest::Approx(2.0 / 3));
    CHECK(*m.negative_rejection == doctest::Approx(0.5));
    // accuracy is the weighted mean of the partitions
    CHECK(m.accuracy == doctest::Approx((3 * *m.faithfulness + 2 * *m.negative_rejection) / 5));
  }

  TEST_CASE("non-TC tallies have no partitions") {
    GenerationTally t;
    t.add(true, std::nullopt);
    t.add(false, std::nullopt);
    const GenerationMetrics m = t.metrics();
    CHECK(m.accuracy == 0.5);
    CHECK_FALSE(m.faithfulness);
    CHECK_FALSE(m.negative_rejection);
  }

  TEST_CASE("tallies pool") {
    GenerationTally a, b;
    a.add(true, true);
    b.add(false, false);
    b.add_errored();
    a += b;
    CHECK(a.metrics().scored == 2);
    CHECK(a.metrics().errored_count == 1);
    CHECK(*a.metrics().faithfulness == 1.0);
    CHECK(*a.metrics().negative_rejection == 0.0);
  }
}
