#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mcbr24/case_repository.hpp"

namespace mcbr {

enum class SimilarityMode { kFeatures, kLatent };

std::string_view to_string(SimilarityMode mode);
SimilarityMode parse_similarity_mode(std::string_view text);  // "features" | "latent"

// a.b / (|a| |b|). Throws ZeroVector if either norm is zero and
// std::invalid_argument on a length mismatch.
double cosine_sim(std::span<const double> a, std::span<const double> b);

// Positive weights summing to one, one per problem component.
class ComponentWeights {
 public:
  static constexpr double kSumTolerance = 1e-9;

  // Throws WeightSumViolation.
  explicit ComponentWeights(std::vector<double> weights);
  static ComponentWeights single() { return ComponentWeights({1.0}); }

  std::span<const double> values() const { return weights_; }
  std::size_t size() const { return weights_.size(); }

 private:
  std::vector<double> weights_;
};

// sum_j w_j * sim_j. Throws std::invalid_argument on a length mismatch.
double weighted_similarity(std::span<const double> component_sims, const ComponentWeights& weights);

struct RankedHit {
  std::string id;
  double score;
};

struct RankedResult {
  std::vector<RankedHit> hits;  // descending score, ties by ascending id
  bool short_result = false;    // fewer than k candidates were available
};

// A retrievable item: one vector per problem component.
struct Candidate {
  std::string id;
  std::vector<std::span<const double>> components;
};

// Exact top-k over `candidates` by weighted cosine similarity to `query`.
RankedResult rank_top_k(std::span<const Candidate> candidates, const std::vector<std::span<const double>>& query,
                        const ComponentWeights& weights, std::size_t k, const std::set<std::string>& exclude);

// Math-24 retrieval: one problem component (the card), compared through the
// chosen index column. Throws IndexMissing when the column is not built and
// std::invalid_argument for k == 0.
RankedResult top_k(const Repository& repo, const IndexEntry& query, std::size_t k, SimilarityMode mode,
                   const std::set<std::string>& exclude = {});

}  // namespace mcbr
