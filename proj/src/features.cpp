#include "mcbr24/features.hpp"

namespace mcbr {

std::vector<double> FeatureVector::values() const {
  std::vector<double> out;
  out.reserve(kSize);
  for (int c : global_counts) out.push_back(c);
  for (const auto& row : per_position_counts) {
    for (int c : row) out.push_back(c);
  }
  return out;
}

FeatureVector extract_features(const Puzzle& puzzle) {
  FeatureVector f;
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      for (std::size_t t = 0; t < kPairTargets.size(); ++t) {
        if (!pair_achieves(puzzle.at(i), puzzle.at(j), kPairTargets[t])) continue;
        ++f.global_counts[t];
        ++f.per_position_counts[static_cast<std::size_t>(i - 1)][t];
        ++f.per_position_counts[static_cast<std::size_t>(j - 1)][t];
      }
    }
  }
  return f;
}

LabelVector encode_labels(std::span<const Solution> solutions) {
  LabelVector labels;
  for (const Solution& s : solutions) {
    const std::size_t base = 5 * category_index(s.category.id);
    labels.bits[base] = 1;
    for (int p : s.large_positions) labels.bits[base + static_cast<std::size_t>(p)] = 1;
  }
  return labels;
}

ModelInput model_input(const Puzzle& puzzle) {
  ModelInput in{};
  std::size_t k = 0;
  for (int n : puzzle.numbers()) in[k++] = n / 13.0;
  for (double c : extract_features(puzzle).values()) in[k++] = c / 6.0;
  return in;
}

}  // namespace mcbr
