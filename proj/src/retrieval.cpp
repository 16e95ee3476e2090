#include "mcbr24/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mcbr24/errors.hpp"

namespace mcbr {

std::string_view to_string(SimilarityMode mode) {
  return mode == SimilarityMode::kFeatures ? "features" : "latent";
}

SimilarityMode parse_similarity_mode(std::string_view text) {
  if (text == "features" || text == "Features") return SimilarityMode::kFeatures;
  if (text == "latent" || text == "Latent") return SimilarityMode::kLatent;
  throw ConfigError("unknown similarity mode '" + std::string(text) + "' (expected features or latent)");
}

double cosine_sim(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_sim: vectors differ in length");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroVector("cosine_sim: zero-norm vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

ComponentWeights::ComponentWeights(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw WeightSumViolation("at least one component weight is required");
  for (double w : weights_) {
    if (!(w > 0.0)) throw WeightSumViolation("component weights must be positive");
  }
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw WeightSumViolation("component weights must sum to 1, got " + std::to_string(sum));
  }
}

double weighted_similarity(std::span<const double> component_sims, const ComponentWeights& weights) {
  if (component_sims.size() != weights.size()) {
    throw std::invalid_argument("one similarity is needed per component weight");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < component_sims.size(); ++j) total += weights.values()[j] * component_sims[j];
  return total;
}

RankedResult rank_top_k(std::span<const Candidate> candidates, const std::vector<std::span<const double>>& query,
                        const ComponentWeights& weights, std::size_t k, const std::set<std::string>& exclude) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (query.size() != weights.size()) throw std::invalid_argument("query needs one vector per component weight");
  RankedResult result;
  std::vector<double> sims(query.size());
  for (const Candidate& c : candidates) {
    if (exclude.count(c.id)) continue;
    if (c.components.size() != query.size()) throw std::invalid_argument("candidate " + c.id + " has wrong arity");
    for (std::size_t j = 0; j < query.size(); ++j) sims[j] = cosine_sim(query[j], c.components[j]);
    result.hits.push_back({c.id, weighted_similarity(sims, weights)});
  }
  const auto order = [](const RankedHit& a, const RankedHit& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  };
  if (result.hits.size() <= k) {
    result.short_result = result.hits.size() < k;
    std::sort(result.hits.begin(), result.hits.end(), order);
  } else {
    std::partial_sort(result.hits.begin(), result.hits.begin() + static_cast<std::ptrdiff_t>(k), result.hits.end(),
                      order);
    result.hits.resize(k);
  }
  return result;
}

RankedResult top_k(const Repository& repo, const IndexEntry& query, std::size_t k, SimilarityMode mode,
                   const std::set<std::string>& exclude) {
  const auto& index = repo.index();
  if (mode == SimilarityMode::kLatent && !repo.has_latent_index() && !repo.empty()) {
    throw IndexMissing("repository index has no latent column");
  }
  auto column = [mode](const IndexEntry& e) -> std::span<const double> {
    return mode == SimilarityMode::kFeatures ? std::span<const double>(e.features) : std::span<const double>(e.latent);
  };
  if (column(query).empty()) throw IndexMissing("query has no " + std::string(to_string(mode)) + " vector");
  std::vector<Candidate> candidates;
  candidates.reserve(repo.size());
  for (std::size_t i = 0; i < repo.size(); ++i) {
    candidates.push_back({repo.cases()[i].id, {column(index[i])}});
  }
  return rank_top_k(candidates, {column(query)}, ComponentWeights::single(), k, exclude);
}

}  // namespace mcbr
