#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcbr24/case_repository.hpp"

namespace mcbr {

enum class RelevanceScheme { kSCO, kSCD };

std::string_view to_string(RelevanceScheme scheme);

// SCO: the cases share a solution category. SCD: they share a
// (category, large_positions) decomposition.
bool is_relevant(const Case& test, const Case& candidate, RelevanceScheme scheme);

struct MetricsAtK {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double ndcg = 0.0;
  double mrr = 0.0;
};

// `relevant` holds one flag per ranked hit (it may be shorter than k).
// Binary gains with discount 1 / log2(rank + 1); the ideal DCG reorders the
// retrieved flags so every hit comes first.
MetricsAtK retrieval_metrics_at_k(const std::vector<bool>& relevant, std::size_t relevant_total, std::size_t k);

// Each metric averaged over `ks`.
using RetrievalMetrics = MetricsAtK;
RetrievalMetrics average_over_k(const std::vector<bool>& relevant, std::size_t relevant_total,
                                std::span<const int> ks);

struct GenerationMetrics {
  double accuracy = 0.0;
  std::optional<double> faithfulness;
  std::optional<double> negative_rejection;
  std::size_t scored = 0;
  std::size_t errored_count = 0;
};

// Counts outcomes; for TC each case also lands in the admissible (context
// holds a usable tip) or inadmissible partition.
class GenerationTally {
 public:
  void add_errored() { ++errored_; }
  void add(bool correct, std::optional<bool> context_admissible);
  GenerationTally& operator+=(const GenerationTally& other);

  GenerationMetrics metrics() const;

  std::size_t scored() const { return scored_; }
  std::size_t admissible_total() const { return admissible_total_; }
  std::size_t inadmissible_total() const { return inadmissible_total_; }

 private:
  std::size_t scored_ = 0;
  std::size_t correct_ = 0;
  std::size_t admissible_total_ = 0;
  std::size_t admissible_correct_ = 0;
  std::size_t inadmissible_total_ = 0;
  std::size_t inadmissible_correct_ = 0;
  std::size_t errored_ = 0;
  bool partitioned_ = false;
};

}  // namespace mcbr
