#include "mcbr24/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcbr {

std::string_view to_string(RelevanceScheme scheme) { return scheme == RelevanceScheme::kSCO ? "SCO" : "SCD"; }

bool is_relevant(const Case& test, const Case& candidate, RelevanceScheme scheme) {
  for (const Solution& a : test.solutions) {
    for (const Solution& b : candidate.solutions) {
      if (a.category.id != b.category.id) continue;
      if (scheme == RelevanceScheme::kSCO || a.large_positions == b.large_positions) return true;
    }
  }
  return false;
}

MetricsAtK retrieval_metrics_at_k(const std::vector<bool>& relevant, std::size_t relevant_total, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const std::size_t depth = std::min(k, relevant.size());
  std::size_t hits = 0;
  double dcg = 0.0;
  double mrr = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (!relevant[i]) continue;
    ++hits;
    dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    if (mrr == 0.0) mrr = 1.0 / static_cast<double>(i + 1);
  }
  double idcg = 0.0;
  for (std::size_t i = 0; i < hits; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);

  MetricsAtK m;
  m.precision = static_cast<double>(hits) / static_cast<double>(k);
  m.recall = relevant_total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(relevant_total);
  m.f1 = (m.precision + m.recall) == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.ndcg = idcg == 0.0 ? 0.0 : dcg / idcg;
  m.mrr = mrr;
  return m;
}

RetrievalMetrics average_over_k(const std::vector<bool>& relevant, std::size_t relevant_total,
                                std::span<const int> ks) {
  if (ks.empty()) throw std::invalid_argument("at least one k is required");
  RetrievalMetrics avg;
  for (int k : ks) {
    if (k <= 0) throw std::invalid_argument("k must be positive");
    const MetricsAtK m = retrieval_metrics_at_k(relevant, relevant_total, static_cast<std::size_t>(k));
    avg.precision += m.precision;
    avg.recall += m.recall;
    avg.f1 += m.f1;
    avg.ndcg += m.ndcg;
    avg.mrr += m.mrr;
  }
  const double n = static_cast<double>(ks.size());
  avg.precision /= n;
  avg.recall /= n;
  avg.f1 /= n;
  avg.ndcg /= n;
  avg.mrr /= n;
  return avg;
}

void GenerationTally::add(bool correct, std::optional<bool> context_admissible) {
  ++scored_;
  if (correct) ++correct_;
  if (!context_admissible) return;
  partitioned_ = true;
  if (*context_admissible) {
    ++admissible_total_;
    if (correct) ++admissible_correct_;
  } else {
    ++inadmissible_total_;
    if (correct) ++inadmissible_correct_;
  }
}

GenerationTally& GenerationTally::operator+=(const GenerationTally& o) {
  scored_ += o.scored_;
  correct_ += o.correct_;
  admissible_total_ += o.admissible_total_;
  admissible_correct_ += o.admissible_correct_;
  inadmissible_total_ += o.inadmissible_total_;
  inadmissible_correct_ += o.inadmissible_correct_;
  errored_ += o.errored_;
  partitioned_ = partitioned_ || o.partitioned_;
  return *this;
}

GenerationMetrics GenerationTally::metrics() const {
  auto rate = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  GenerationMetrics m;
  m.accuracy = rate(correct_, scored_);
  m.scored = scored_;
  m.errored_count = errored_;
  if (partitioned_) {
    if (admissible_total_ > 0) m.faithfulness = rate(admissible_correct_, admissible_total_);
    if (inadmissible_total_ > 0) m.negative_rejection = rate(inadmissible_correct_, inadmissible_total_);
  }
  return m;
}

}  // namespace mcbr
